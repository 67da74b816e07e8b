"""Back-translation evaluation: prompts, client, runner, and scoring."""

from .client import API_KEY_ENV, ChatClient, ChatRequest, request_hash
from .parsing import (
    CORRECT,
    INCORRECT,
    SCALE_RATINGS,
    UNPARSED,
    parse_binary,
    parse_scale,
    parse_translation,
)
from .prompts import (
    BINARY_COT_SYSTEM_PROMPT,
    BINARY_ZERO_SHOT_SYSTEM_PROMPT,
    SCALE_SYSTEM_PROMPT,
    TRANSLATE_SYSTEM_TEMPLATE,
    judge_user_content,
    translate_system_prompt,
)
from .runner import (
    JudgeRunner,
    JudgeVerdict,
    RunLog,
    TranslationResult,
    run_backtranslation,
)
from .scoring import (
    AccuracyRow,
    ConcordanceRow,
    accuracy_table,
    concordance,
    write_accuracy_report,
    write_concordance_report,
)

__all__ = [
    "API_KEY_ENV",
    "ChatClient",
    "ChatRequest",
    "request_hash",
    "CORRECT",
    "INCORRECT",
    "SCALE_RATINGS",
    "UNPARSED",
    "parse_binary",
    "parse_scale",
    "parse_translation",
    "BINARY_COT_SYSTEM_PROMPT",
    "BINARY_ZERO_SHOT_SYSTEM_PROMPT",
    "SCALE_SYSTEM_PROMPT",
    "TRANSLATE_SYSTEM_TEMPLATE",
    "judge_user_content",
    "translate_system_prompt",
    "JudgeRunner",
    "JudgeVerdict",
    "RunLog",
    "TranslationResult",
    "run_backtranslation",
    "AccuracyRow",
    "ConcordanceRow",
    "accuracy_table",
    "concordance",
    "write_accuracy_report",
    "write_concordance_report",
]
