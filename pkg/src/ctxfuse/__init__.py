"""Score-driven fusion of LLM rationales and retrieved contexts.

Combines two knowledge sources per question (a generated rationale and a
retrieved paragraph context) using ranker scores and a configurable
combination strategy, evaluates the result with numeracy-aware metrics,
sweeps strategies to find the generally-best one, and synthesizes training
data for the ranker itself.
"""

from .builders import (
    GoldParagraph,
    McSample,
    PairingResult,
    RRExample,
    SharedNormPair,
    build_negative_iterator_like,
    build_positive_iterator_like,
    build_rationale_like,
    build_sqa_5way,
    filter_leaked_negatives,
    pair_shared_norm,
)
from .contexts import (
    ContextBudget,
    build_model_input,
    format_combined_context,
    format_retrieved_context,
)
from .fusion import (
    Category,
    ScoredComponents,
    StrategyConfig,
    SweepSample,
    SweepTable,
    combine,
    default_ladder,
    select_best_per_dataset,
    select_generally_best,
    sweep,
)
from .metrics import (
    NormalizedBag,
    extract_answer,
    macro_mean,
    normalize_answer,
    numeracy_f1,
    round1,
    score_binary,
    score_multichoice,
)
from .prompts import (
    Exemplar,
    PromptTemplate,
    build_cot_prompt,
    build_negative_gen_prompt,
    check_no_eval_overlap,
    to_answer_only,
)
from .records import (
    EvalSample,
    Fragment,
    RunRecord,
    ValidationError,
    build_report,
    load_eval_dataset,
    summary_mean,
    write_eval_dataset,
    write_run_report,
)
from .scoring import (
    MockLexicalScorer,
    RemoteScorer,
    ScorerError,
    make_scorer,
    mc1_select,
    relevance_5way_accuracy,
    rr_dev_accuracy,
)
from .stemming import stem, stem_tokens

__version__ = "0.1.0"
