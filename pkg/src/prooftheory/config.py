from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    """Knobs for the reduction engine and the evaluation sweeps."""
    fuel: int = 100_000
    # re-run check_proof on every rewritten proof
    verify_each_step: bool = True
    # abort when the local descent of a step cannot be certified
    require_certificates: bool = True
    # additionally search for counterexamples to every emitted certificate
    refute_certificates: bool = False
    # term depth for the order-law sweep
    enumeration_depth: int = 4
    # term depth for the hull, order-fact and certificate sweeps
    sweep_depth: int = 3
    # instances drawn (or certified) by the sampled sweeps
    sweep_instances: int = 1000
    # at most this many pairs are compared when the full square is larger
    pair_limit: int = 20_000
    seed: int = 42
    # rewrite passes allowed while inserting vacuous reductions and substitutions
    insertion_limit: int = 10_000
    # largest n tried for the (sub)⁰ stack ω_n(I+1)
    stack_tower_limit: int = 8


DEFAULT_CONFIG = EngineConfig()
