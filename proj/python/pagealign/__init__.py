"""Page alignment between document revisions (C++ core)."""

from ._pagealign import (
    DocumentBundle,
    PageFingerprint,
    PagealignError,
    ValidationError,
    __version__,
    compare,
    evaluate,
    extract_drawing_number,
    fingerprints,
    load_bundle,
    match,
    normalize_text,
    phash_similarity,
    run_cli,
    sequence_blocks,
    text_similarity,
)

__all__ = [
    "DocumentBundle",
    "PageFingerprint",
    "PagealignError",
    "ValidationError",
    "__version__",
    "compare",
    "evaluate",
    "extract_drawing_number",
    "fingerprints",
    "load_bundle",
    "match",
    "normalize_text",
    "phash_similarity",
    "run_cli",
    "sequence_blocks",
    "text_similarity",
]
