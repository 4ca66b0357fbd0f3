"""Open parity games: composition, fixpoint expressions and canonical normal forms."""
from opg.config import DEFAULT_CONFIG, RunConfig
from opg.errors import (
    BoundaryMismatchError, InvalidGameError, OPGError, ParseError, PreconditionError,
    ResourceGuardError,
)
from opg.expr import (
    Bot, Expr, ExprSystem, Join, Meet, Mu, Pri, Top, Var, alpha_equal, expr_to_game,
    game_to_exprs, parse_expr, print_expr, substitute,
)
from opg.fixpoint import (
    Derivation, derive_game, eliminate_mu, eliminate_mu_by_arena, nf_compose, nf_tensor,
    normalize, normalize_game,
    normalize_system, solve_closed, solve_system,
)
from opg.game import (
    PLAYER0, PLAYER1, Boundary, OpenParityGame, Position, close, compose, empty, identity,
    swap, tensor, validate,
)
from opg.normal_form import (
    NormalForm, canonicalize, nf_equal, nf_join, nf_meet, nf_priority, nf_substitute,
    nf_to_expr, nf_var, normalize_acyclic, priority_leq,
)
from opg.trace import RewriteStep, RewriteTrace, replay

__version__ = "0.1.0"
