"""Compare the one-pass block compressor with the BWT pipeline on a few inputs."""

import math

import numpy as np

from rwstreams import StreamMachine, adversarial_string, compress, default_budget, entropy_only_compress, hk

rng = np.random.default_rng(0)
n = 1 << 16
inputs = {
    "random bits": rng.integers(0, 2, n),
    "unary": np.zeros(n, np.int64),
    "de Bruijn order 8": adversarial_string(2, 8, n),
    "markov flip 0.1": np.cumsum(rng.random(n) < 0.1) % 2,
}
print(f"{'input':20s} {'H_1 bits':>10s} {'block bits':>11s} {'passes':>6s} {'bwt bits':>9s} {'passes':>6s}")
for name, s in inputs.items():
    m1 = StreamMachine(default_budget(n))
    block = compress(m1, s, sigma=2).payload_bits()
    m2 = StreamMachine(default_budget(n))
    eo = len(entropy_only_compress(m2, s))
    print(f"{name:20s} {n * hk(s, 1):10.0f} {block:11d} {m1.total_passes:6d} {eo:9d} {m2.total_passes:6d}")
print(f"ceil(log2 n)^2 = {math.ceil(math.log2(n)) ** 2}")
