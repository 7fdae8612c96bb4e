"""Boxes versus foams: how often two nearby points round apart."""

import numpy as np

from reprolearn.randomness import RandomStream
from reprolearn.rounding import construct_boxes, construct_foams

root = RandomStream(5, ("demo-rounding",))
draws = 4000
print(f"{'eps':>5} {'box':>7} {'foam':>7} {'2*eps':>6}")
for eps in (0.01, 0.02, 0.05, 0.1):
    hits = {"box": 0, "foam": 0}
    for i in range(draws):
        s = root.derive(f"{eps}/{i}")
        x = s.uniforms(2, 0, 8)
        u = s.generator().standard_normal(2)
        pts = np.vstack([x, x + eps * u / np.linalg.norm(u)])
        for kind, make in (("box", construct_boxes), ("foam", construct_foams)):
            out = make(2, s.derive(kind)).apply(pts)
            hits[kind] += not np.array_equal(out[0], out[1])
    print(f"{eps:5.2f} {hits['box'] / draws:7.4f} {hits['foam'] / draws:7.4f} {2 * eps:6.2f}")

F = construct_foams(2, root.derive("stages"))
pts, stage = F.assign(root.derive("pts").uniforms(2000, -5, 5).reshape(-1, 2))
print(f"foam: 1000 points captured within {stage.max() + 1} stages (mean {stage.mean() + 1:.2f})")
