"""Sort numbers by reading them off the tail of one BWT."""

import numpy as np

from rwstreams import SortInstance, StreamMachine, default_budget, encode_instance, sort_via_bwt

rng = np.random.default_rng(1)
for n in (4, 16, 64):
    values = tuple(int(v) for v in rng.integers(0, n * n, n))
    inst = SortInstance(n, values)
    s = encode_instance(inst)
    m = StreamMachine(default_budget(len(s)))
    out = sort_via_bwt(m, inst)
    assert out == sorted(values)
    print(f"n={n:3d}  encoded {len(s):6d} symbols  passes {m.total_passes:4d}  first values {out[:6]}")
