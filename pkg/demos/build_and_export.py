"""Walk through one random chain: sample it, inspect it, export it.

Run:  python3 demos/build_and_export.py [seed]
"""

import sys
from fractions import Fraction

import numpy as np

from pentachain import (
    ProbabilityParams,
    build_graph,
    incremental_indices,
    sample_blueprint,
    structured_metrics,
)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
n = 6
p = ProbabilityParams(Fraction(1, 2))

rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
blueprint = sample_blueprint(n, p, rng)
print("blueprint:", blueprint.to_json())

# the graph: 5n vertices, 6n - 1 edges, bridge endpoints get degree 3
graph = build_graph(blueprint)
print(f"vertices: {graph.vertex_count}  edges: {graph.edge_count}")
print("bridges:", graph.bridges)
degree_3 = [v for v, d in enumerate(graph.degrees) if d == 3]
print("degree-3 vertices:", degree_3)

# first few edges of the edge list export
print("edge list head:")
for line in graph.edge_list_text().splitlines()[:6]:
    print("  ", line)

# exact metric matrices; resistance entries are fifths
dist, res = structured_metrics(blueprint)
print(f"diameter: {int(dist.data.max())}")
u, v = np.unravel_index(res.data.argmax(), res.data.shape)
print(f"largest resistance: r({u}, {v}) = {res.entry(int(u), int(v))}")
print(f"distance sum: {dist.total()}   resistance sum: {res.total()}")

# all six indices of this realization, exact
bundle = incremental_indices(blueprint)
print("indices:", bundle.to_json())
