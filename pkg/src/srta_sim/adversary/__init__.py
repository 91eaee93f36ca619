from .attacks import (ATTACKS, AttackOutcome, attack_dos,
                      attack_reader_impersonation, attack_reader_traceability,
                      attack_tag_impersonation, attack_tag_traceability)
from .game import (CoinFlip, Distinguisher, GameResult, LiteralCompareC,
                   Omniscient, ReaderIdentifier, TagIdentifier, run_upriv_game)
from .oracle import (SERVER, Challenge, Oracle, QueryBudgetExceeded, QueryError,
                     Reader, Tag, TestQueryError, UnknownPartyError)

__all__ = [
    "ATTACKS", "AttackOutcome", "attack_dos", "attack_reader_impersonation",
    "attack_reader_traceability", "attack_tag_impersonation", "attack_tag_traceability",
    "CoinFlip", "Distinguisher", "GameResult", "LiteralCompareC", "Omniscient",
    "ReaderIdentifier", "TagIdentifier", "run_upriv_game",
    "SERVER", "Challenge", "Oracle", "QueryBudgetExceeded", "QueryError",
    "Reader", "Tag", "TestQueryError", "UnknownPartyError",
]
