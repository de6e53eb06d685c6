# ==============================================================
# Helper functions to load the prepared proof corpus
# ==============================================================

import logging
from dataclasses import replace
from pathlib import Path
from typing import Dict

from src.prooftheory.config import DEFAULT_CONFIG, EngineConfig
from src.prooftheory.embedding_bridge import substitution_stack
from src.prooftheory.proof_codec import parse_proof
from src.prooftheory.proof_tree import SUB, Preproof, iter_nodes, node_at, replace_at

_logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).parent / "corpus"
TARGETED_DIR = CORPUS_DIR / "targeted"


def _load_dir(base_path: Path, pattern: str) -> Dict[str, Preproof]:
    files = sorted(base_path.glob(pattern))
    if not files:
        raise FileNotFoundError(f"No {pattern} files found in {base_path}.")
    proofs = {}
    for f in files:
        proofs[f.stem] = parse_proof(f.read_text(encoding="utf-8"))
        _logger.debug("loaded %s (%s)", f.name, proofs[f.stem].system)
    return proofs


def load_corpus(base_dir=CORPUS_DIR) -> Dict[str, Preproof]:
    """
    Loads the SBL derivations shipped with the package.

    Output:
        Dict mapping the file stem (e.g. "cut_prime") to its Preproof
    """
    return _load_dir(Path(base_dir), "*.sbl")


def fill_stacks(proof: Preproof, config: EngineConfig = DEFAULT_CONFIG) -> Preproof:
    """Chooses the least fitting stack for every (sub) written without one, innermost first."""
    root = proof.root
    pending = sorted((p for p, n in iter_nodes(root) if n.rule.tag == SUB and n.rule.stack is None),
                     key=len, reverse=True)
    for path in pending:
        node = node_at(root, path)
        gamma = substitution_stack(node, config.stack_tower_limit)
        root = replace_at(root, path, replace(node, rule=replace(node.rule, stack=gamma)))
    return Preproof(root, proof.system)


def load_targeted(base_dir=TARGETED_DIR, config: EngineConfig = DEFAULT_CONFIG) -> Dict[str, Preproof]:
    """
    Loads hand-built SBL′ proofs that reach reduction cases the embedded
    corpus does not start in. Missing stacks are filled in.
    """
    return {name: fill_stacks(p, config) for name, p in _load_dir(Path(base_dir), "*.sblp").items()}
