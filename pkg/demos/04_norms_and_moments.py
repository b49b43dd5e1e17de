"""Operator-norm bound, the small-point split, and the moment identity."""

from centralmeasure import (
    ErgodicParams, moment_mc_check, moment_oracle, new_sample, norm_check, split_experiment,
    truncate_power_tail,
)

tail = truncate_power_tail(c=1.0, exponent=1.0, tol=0.01)
print(f"power tail kept {tail.p} points, discarded squared mass <= {tail.tail_bound:.4f}")

for name, params in (("two points", ErgodicParams(points=(2.0, -1.0))), ("power tail", tail)):
    rows = norm_check(new_sample(params, 3), (64, 256, 512), slack=0.25)
    print(name, [(r.n, round(r.norm_over_n, 3)) for r in rows], "bound", round(rows[0].bound, 3))

rep = split_experiment(tail, epsilon=0.1, seed=3, n=512)
print(f"points below 0.1 only: |B|/n = {rep.b_norm_over_n:.3f} <= {rep.bound:.3f}")

for n, r in ((10, 2), (10, 3), (100, 2)):
    emp, orc, z = moment_mc_check(n, r, 100_000, seed=5)
    print(f"E|xi|^{2 * r} at n={n}: {emp:.6g} vs {orc} (z={z:+.2f})")
print("second moment is n^2 + n:", all(moment_oracle(n, 2) == n * n + n for n in range(1, 50)))
