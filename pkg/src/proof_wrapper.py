import time
import tracemalloc
from typing import Any, Dict

from src.prooftheory.calculus import assign_ordinals, check_lk, check_proof, check_sbl
from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.embedding_bridge import embed_sbl, extract_lk
from src.prooftheory.errors import ProofToolError
from src.prooftheory.essential_order import bounded_refute, derive_ell
from src.prooftheory.ordinal_notation import ZERO, compare
from src.prooftheory.proof_codec import format_proof, format_stacks, parse_proof
from src.prooftheory.proof_tree import LK, SBL, Preproof
from src.prooftheory.reduction_engine import normalize, reduce_step
from src.prooftheory.sexpr_codec import parse_ordinal

OPERATIONS = ("check", "ord", "embed", "step", "run", "cmp", "refute")


class ProofWrapper:
    """
    Wrapper class to standardize the toolkit operations behind one entry
    point and measure their performance. Used by the web application.
    """

    @staticmethod
    def _proof(payload: Dict[str, Any]) -> Preproof:
        text = payload.get("proof")
        if not text:
            raise ValueError("payload has no 'proof' text")
        return parse_proof(text)

    @staticmethod
    def _sblp(payload: Dict[str, Any], config: EngineConfig) -> Preproof:
        proof = ProofWrapper._proof(payload)
        if proof.system == SBL:
            proof, _ = embed_sbl(proof, config)
        return proof

    @staticmethod
    def _terms(payload: Dict[str, Any]):
        terms = payload.get("terms") or []
        if len(terms) not in (2, 3) or not all(isinstance(t, str) for t in terms):
            raise ValueError("expected 'terms': [d0, d1] or [d0, d1, context]")
        parsed = [parse_ordinal(t) for t in terms]
        return parsed[0], parsed[1], parsed[2] if len(parsed) == 3 else ZERO

    @staticmethod
    def _execute(operation: str, payload: Dict[str, Any], config: EngineConfig) -> Dict[str, Any]:
        if operation == "check":
            proof = ProofWrapper._proof(payload)
            checker = {SBL: check_sbl, LK: check_lk}.get(proof.system, check_proof)
            report = checker(proof)
            return {"system": proof.system, **report.to_dict()}

        if operation == "ord":
            ann = assign_ordinals(ProofWrapper._sblp(payload, config))
            return {"ordinal": str(ann.proof_ordinal), "annotation": ann.dump()}

        if operation == "embed":
            p0, sck = embed_sbl(ProofWrapper._proof(payload), config)
            return {"proof": format_proof(p0), "stacks": format_stacks(sck)}

        if operation == "step":
            result, _, step = reduce_step(ProofWrapper._sblp(payload, config), config=config)
            return {"proof": format_proof(result), "step": step.to_dict()}

        if operation == "run":
            outcome = normalize(ProofWrapper._sblp(payload, config), config=config)
            data = {
                "cut_free": outcome.cut_free,
                "steps": outcome.steps,
                "trace": [s.to_dict() for s in outcome.trace],
                "proof": format_proof(outcome.proof),
            }
            if outcome.cut_free:
                data["lk"] = format_proof(extract_lk(outcome.proof))
            return data

        if operation == "cmp":
            a, b, _ = ProofWrapper._terms(payload)
            return {"ordering": compare(a, b).name}

        if operation == "refute":
            d0, d1, eta = ProofWrapper._terms(payload)
            cert = derive_ell(d0, d1, eta)
            witness = bounded_refute(d0, d1, eta)
            return {
                "certificate": str(cert) if cert else None,
                "counterexample": [str(x) for x in witness] if witness else None,
            }

        raise ValueError(f"Unknown operation: {operation}")

    @staticmethod
    def run_operation(operation: str, payload: Dict[str, Any], fuel: int = None) -> Dict[str, Any]:
        """
        Executes the specified operation and returns the result along with performance metrics.

        Input:
            operation (str): one of OPERATIONS
            payload (dict): "proof" holds proof text; "terms" holds ordinal terms for cmp/refute
            fuel (int): step limit for run, defaults to the engine's
        Output:
            dict with the operation's fields plus time_taken and memory_peak_kb,
            or {"error": message, "code": exit code} on failure
        """
        config = EngineConfig(fuel=fuel) if fuel is not None else DEFAULT_CONFIG

        tracemalloc.start()
        start_time = time.perf_counter()
        try:
            result = ProofWrapper._execute(operation, payload, config)
        except ProofToolError as e:
            tracemalloc.stop()
            return {"error": str(e), "code": e.exit_code}
        except ValueError as e:
            tracemalloc.stop()
            return {"error": str(e), "code": 1}

        end_time = time.perf_counter()
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()

        result.update({
            "operation": operation,
            "time_taken": end_time - start_time,
            "memory_peak_kb": peak / 1024,
        })
        return result
