"""
Seed Domains

Every random stream in the package is keyed by (seed, domain, *keys) so
that streams never overlap and results do not depend on call order.
"""

import numpy as np

SEED_MASK = (1 << 64) - 1

# Domains
DOMAIN_WEIGHTS_ALL = 11
DOMAIN_WEIGHTS_COMMUNITY = 12
DOMAIN_WEIGHTS_REST = 13
DOMAIN_POSITIONS = 21
DOMAIN_NONGEO_EDGES = 31
DOMAIN_CROSS_THINNING = 32
DOMAIN_COMMUNITY_EDGES = 33
DOMAIN_NAIVE_EDGES = 34
DOMAIN_ORACLE = 91


def seed_sequence(seed: int, domain: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & SEED_MASK, domain, *[int(k) for k in keys]])


def make_rng(seed: int, domain: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for one (seed, domain) stream."""
    return np.random.default_rng(seed_sequence(seed, domain, *keys))


def make_counter_rng(seed: int, domain: int, *keys: int) -> np.random.Generator:
    """Philox (counter-based) generator; draw j of the stream depends only on j."""
    return np.random.Generator(np.random.Philox(seed_sequence(seed, domain, *keys)))


def kernel_seed(seed: int, domain: int, *keys: int) -> int:
    """32-bit seed for numba's internal generator."""
    return int(seed_sequence(seed, domain, *keys).generate_state(1, dtype=np.uint32)[0])


def replica_seed(seed: int, replica_index: int) -> int:
    return (int(seed) ^ int(replica_index)) & SEED_MASK
