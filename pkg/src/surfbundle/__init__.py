"""Fundamental groups of genus-two surface bundles over the circle."""
from .mcg import SurfaceAutomorphism, TwistWord, apply_automorphism, apply_twist, automorphism_of, family_word, free_reduce
from .presentation import FiberType, Presentation, bundle_presentation
from .homology import HomologySummary, IntMatrix, abelianize, homology_of, smith_normal_form
from .simplify import (
    Budgets,
    RankCertificate,
    SimplificationTrace,
    certify_monodromy,
    certify_rank,
    nonabelian_witness,
    rank_upper_bound,
    tietze_eliminate,
)
from .census import CensusRecord, canonicalize, classify, enumerate_words, random_search

__version__ = "0.1.0"
