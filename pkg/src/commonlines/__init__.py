"""Semi-algebraic modeling of cryo-EM common-lines data.

The package models common lines between microscope image planes, certifies
a data set as realizable by frames via explicit polynomial certificates,
reconstructs realizing frames up to a global orthogonal transform, maps
frame sets to Plücker coordinates, and projects noisy data back onto the
valid set.
"""

__version__ = "0.1.0"

from .denoise import (
    NoiseSpec,
    ProjectionOptions,
    ProjectionResult,
    perturb,
    project_to_cn,
)
from .errors import (
    CoincidentPlanes,
    CommonLinesError,
    DegenerateAngle,
    DegenerateConfiguration,
    DegenerateInput,
    IncompatibleTriples,
    InitializationFailed,
    InvalidData,
    NormMismatch,
    NotGeneric,
    NotIsometric,
    RankDeficient,
    TriangleInequalityViolated,
    UndefinedProjection,
)
from .geometry import (
    Frame,
    FrameSet,
    align_o3,
    cross,
    embed,
    make_frame,
    project,
    random_frame,
    random_frameset,
    random_orthogonal,
    spherical_triangle_vertices,
)
from .grassmann import (
    GaugeSplit,
    PlueckerPoint,
    eta_split,
    jacobian_rank_at,
    pluecker_embed,
    pluecker_project,
)
from .io import (
    load_frames,
    load_lines,
    save_frames,
    save_lines,
)
from .lines import (
    CommonLinePair,
    CommonLinesData,
    TripleAngles,
    pair_distance,
    realize_all,
    realize_pair,
    triple_angles,
)
from .reconstruct import (
    ReconstructionResult,
    TripleFrames,
    frameset_distance_mod_o3,
    gluing_rotation,
    reconstruct_all,
    reconstruct_triple,
)
from .validity import (
    LocCertificate,
    Tolerances,
    TriangleCertificate,
    ValidityReport,
    is_valid,
    loc_residual,
    triangle_gram,
    triangle_gram_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
