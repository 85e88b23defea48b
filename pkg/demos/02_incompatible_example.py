"""A data set every triple of which looks fine, yet no frames realize it.

Four planes, each pair meeting at a common line.  All four triples satisfy
the spherical triangle inequalities, so each triple alone is realizable.
But the two triangles sharing planes 1 and 2 disagree about the dihedral
angle between those planes (cos = sqrt(2)-1 vs sqrt(2)/2), so the whole
collection is not realizable.  The law-of-cosines certificate catches
exactly this.
"""

import numpy as np

from commonlines import (
    CommonLinePair,
    CommonLinesData,
    IncompatibleTriples,
    InvalidData,
    gluing_rotation,
    is_valid,
    loc_residual,
    reconstruct_all,
    reconstruct_triple,
    triangle_gram,
    triple_angles,
)

s = np.sqrt(2) / 2
raw = {
    (1, 2): ((1, 0), (1, 0)),
    (1, 3): ((s, s), (1, 0)),
    (1, 4): ((0, 1), (1, 0)),
    (2, 3): ((s, s), (s, s)),
    (2, 4): ((0, 1), (s, s)),
    (3, 4): ((0, 1), (0, 1)),
}
data = CommonLinesData(
    4,
    {k: CommonLinePair.from_vectors(k[0], k[1], u, w) for k, (u, w) in raw.items()},
)

for t in ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)):
    angles = triple_angles(data, *t)
    gram = triangle_gram(data, *t)
    print(
        f"triple {t}: angles = ({angles.alpha:.4f}, {angles.beta:.4f}, "
        f"{angles.gamma:.4f}), gram = {gram.gram_value:.4f} -> "
        f"{'ok' if gram.passes else 'degenerate'}"
    )

cert = loc_residual(data, (1, 2, 3), (1, 2, 4))
print(f"\ncompatibility of triples (1,2,3) and (1,2,4): "
      f"residual = {cert.residual_signed:.6f}  (sqrt(2)/4 - 1/2 = "
      f"{np.sqrt(2) / 4 - 0.5:.6f})")

t123 = reconstruct_triple(data, 1, 2, 3)
t124 = reconstruct_triple(data, 1, 2, 4)
try:
    gluing_rotation(t123, t124)
except IncompatibleTriples as exc:
    print(f"gluing the two triples fails: {exc}")

print(f"\noverall verdict: {is_valid(data).verdict}")
try:
    reconstruct_all(data)
except InvalidData as exc:
    print(f"reconstruction refuses the data: {exc}")
