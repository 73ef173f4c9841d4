"""
Oblivious transfer and the memory attack
========================================

A sender holds two messages; the receiver learns exactly one. The receiver
commits to every BB84 measurement, and the sender opens a random half to
check them. A receiver that stores qubits and measures later cannot commit
honestly and gets caught.
"""

from naorcommit.qot import SessionConfig, delaying_accept_rate, run_session

# %%
# An honest run
# -------------

config = SessionConfig(n=1024, l_msg=32)
report = run_session(config, "honest", b=1, seed=7)
print(report.format())

# %%
# The delaying receiver
# ---------------------
# It commits to guesses, waits for the sender's bases, then measures. Each
# audited position catches it with probability 1/4.

for n in (8, 16, 32, 64):
    cfg = SessionConfig(n=n, l_msg=8)
    accepted = sum(not run_session(cfg, "delaying", seed=s).aborted for s in range(400))
    print(f"n={n:3d}  |T|={cfg.audit_size:2d}  accepted {accepted:3d}/400  predicted {400 * 0.75**cfg.audit_size:6.1f}")

# %%
# The same law by Monte Carlo, far into the tail
# ----------------------------------------------

for t in (8, 16, 24, 32):
    mc = delaying_accept_rate(2 * t, t, 100_000, seed=t)
    print(f"|T|={t:2d}  rate {mc.rate:.2e}  (3/4)^|T| {mc.expected:.2e}  within 3 SE: {mc.within(3)}")

# %%
# Without the audit the attack works
# ----------------------------------

cfg = SessionConfig(n=256, l_msg=16, cut_fraction=0.0)
r = run_session(cfg, "delaying", seed=3)
print("learned the chosen message:", r.correct, " learned the other one too:", r.learned_other)

# %%
# Where the bits go
# -----------------

phases = report.transcript
print({k: v for k, v in sorted(phases.items())})
print("qubits sent:", report.qubits, " classical payload bits:", report.payload_bits,
      f" ({report.payload_bits / report.qubits:.1f} per qubit)")
