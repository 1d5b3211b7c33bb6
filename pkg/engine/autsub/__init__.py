"""
autsub: automorphism groups and conjugacy of constant-length substitution
shifts.
"""

from .__version__ import VERSION as __version__
from .autgroup import AutPresentation, CandidateKappa, aut_group, \
    candidate_kappas, one_sided_aut, search_generator, search_kernel
from .blockcode import BlockCode, code_compose, codes_equal, invert_code, \
    shift_code, trim_radius
from .conj import ConjReport, decide_conjugacy, length_gate
from .exceptions import AlphabetMismatchError, AutsubError, \
    InadmissibleWindowError, InternalConsistencyError, PreconditionError, \
    RAdicError, ResourceLimitError, SubstitutionParseError
from .limits import DEFAULT_LIMITS, Limits
from .radic import RAdicDigits, RAdicRational, cyclic_generator, expand
from .reduce import height, injectivize, pure_base
from .sofic import column_number, kappa_admissible, subset_graph
from .substitution import Substitution, is_infinite, is_primitive, \
    language, parse_substitution

__all__ = [
    "__version__",
    "AutPresentation",
    "CandidateKappa",
    "aut_group",
    "candidate_kappas",
    "one_sided_aut",
    "search_generator",
    "search_kernel",
    "BlockCode",
    "code_compose",
    "codes_equal",
    "invert_code",
    "shift_code",
    "trim_radius",
    "ConjReport",
    "decide_conjugacy",
    "length_gate",
    "AlphabetMismatchError",
    "AutsubError",
    "InadmissibleWindowError",
    "InternalConsistencyError",
    "PreconditionError",
    "RAdicError",
    "ResourceLimitError",
    "SubstitutionParseError",
    "DEFAULT_LIMITS",
    "Limits",
    "RAdicDigits",
    "RAdicRational",
    "cyclic_generator",
    "expand",
    "height",
    "injectivize",
    "pure_base",
    "column_number",
    "kappa_admissible",
    "subset_graph",
    "Substitution",
    "is_infinite",
    "is_primitive",
    "language",
    "parse_substitution",
]
