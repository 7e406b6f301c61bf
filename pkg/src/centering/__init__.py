"""Centering theory for Italian null and overt subjects.

Computes forward/backward-looking centers and transitions, resolves
pronouns incrementally with morphological and disjointness filters,
detects garden paths, and judges or recommends subject forms.
"""

from .corpus import (
    DiscourseDocument,
    DocumentError,
    ParseError,
    SchemaError,
    ValidationError,
    VersionError,
    load_corpus,
    load_document,
    parse_document,
    serialize_document,
)
from .engine import (
    ROLE_HIERARCHY,
    CenteringState,
    RuleCheck,
    RuleStatus,
    Transition,
    TransitionLabel,
    advance,
    check_r1,
    check_r2,
    classify_transition,
    compute_cb,
    rank_cfs,
)
from .felicity import FelicityLabel, FelicityVerdict, FormAdvice, Reason, advise_form, judge
from .model import (
    Clause,
    ClauseType,
    Discourse,
    Entity,
    EntityKind,
    Form,
    Gender,
    MorphFeatures,
    Number,
    Placement,
    ReferringExpression,
    Role,
    Utterance,
    Violation,
    compatible,
    validate,
)
from .report import AnalysisReport, analyze
from .resolver import (
    BindingBasis,
    EventKind,
    ResolutionResult,
    TraceEvent,
    UnresolvableError,
    resolve_clause,
    resolve_utterance,
)

__version__ = "0.1.0"
