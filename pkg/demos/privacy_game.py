"""Play the traceability games and print the estimated advantage with its 3-sigma band."""

from srta_sim.adversary import (CoinFlip, LiteralCompareC, Omniscient, ReaderIdentifier,
                                TagIdentifier, run_upriv_game)

N = 1000
for protocol in ("srta", "improved"):
    for make in (TagIdentifier, ReaderIdentifier, LiteralCompareC, CoinFlip, Omniscient):
        res = run_upriv_game(protocol, make, N, seed=7)
        print(f"{protocol:<9} {res.distinguisher:<10} advantage {res.advantage:.3f} ± {res.halfwidth:.3f}")
