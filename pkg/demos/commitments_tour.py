"""
Commitments in five minutes
===========================

Commit to a couple of bits with each scheme, open them, try to cheat, and
count what goes over the wire.
"""

# %%
# Setup
# -----
# Every random choice comes from one seed, so this script prints the same
# thing on every run.

from naorcommit import BitVector, KeystreamRandom
from naorcommit.commitments import Opening, commit_exchange, expected_payload_bits, get_scheme
from naorcommit.hexio import format_bits

rng = KeystreamRandom(2024).derive("tour")

# %%
# One bit
# -------
# The verifier picks a random 3n-bit string r. The prover sends G(x) when
# committing to 0 and G(x) xor r when committing to 1.

naor = get_scheme("naor-bit", 64)
params = naor.challenge(rng)
c, opening = naor.commit(params, 1, rng)
print("commitment  ", format_bits(c.c))
print("honest open ", naor.verify(params, c, opening))

# Claiming the other bit with the same seed fails.
print("flipped bit ", naor.verify(params, c, Opening(BitVector(1, 0), opening.x)))

# %%
# Two bits for one challenge
# --------------------------
# The second bit reuses the challenge rotated by one position.

two = get_scheme("naor-2bit", 64)
params = two.challenge(rng)
for m in ("00", "01", "10", "11"):
    c, o = two.commit(params, BitVector.from_str(m), rng)
    print(m, two.verify(params, c, o))

# %%
# Strings
# -------
# A t-bit message uses a circulant matrix built from one odd-weight string.

string = get_scheme("circulant-string", 128, 64)
print("commitment width z =", string.commitment_width())
params = string.challenge(rng)
msg = BitVector(64, rng.getrandbits(64))
c, o = string.commit(params, msg, rng)
print("opens:", string.verify(params, c, o))

# %%
# Counting bits
# -------------
# The exchange runs through the real frame encoder; its transcript counts
# payload bits per direction and phase.

for scheme in (naor, two, string, get_scheme("kilian", 128, 64)):
    ex = commit_exchange(scheme, [BitVector(scheme.arity, 0)], reuse_challenge=False, rng=rng)
    print(f"{scheme.id:18s} measured {ex.payload_bits:5d}  closed form {expected_payload_bits(scheme, 1, False):5d}")

# Reusing one challenge for many commitments saves a challenge per commitment.
k = 8
fresh = commit_exchange(two, [BitVector(2, 3)] * k, reuse_challenge=False, rng=rng).payload_bits
reused = commit_exchange(two, [BitVector(2, 3)] * k, reuse_challenge=True, rng=rng).payload_bits
print(f"{k} two-bit commitments: fresh {fresh} bits, reused challenge {reused} bits")
