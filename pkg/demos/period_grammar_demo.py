"""Find a period on two streams and print the small grammar it yields."""

from rwstreams import StreamMachine, build_periodic_grammar, default_budget, grammar_size_bits, min_period_streams

s = "abracadabra" * 37 + "abrac"
m = StreamMachine(default_budget(len(s)))
ell = min_period_streams(m, s)
g = build_periodic_grammar(s, ell)
print(f"n={len(s)} period={ell} passes={m.total_passes} grammar bits={grammar_size_bits(g)}")
print(g.to_text())
