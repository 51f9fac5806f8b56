from eigenbound.bounds.inputs import (
    DEFAULT_SLACK,
    BoundInput,
    BoundInputError,
    compute_D0,
    compute_D1,
)
from eigenbound.bounds.reports import (
    REPORT_COLUMNS,
    BoundReport,
    make_report,
    read_reports_csv,
    write_reports_csv,
    write_reports_json,
)
from eigenbound.bounds.yang import (
    eval_identity_quadratic,
    eval_lower_order_sum,
    eval_recursion,
    eval_sharpgap,
    eval_thm_quadratic,
    eval_yang_classical,
    eval_yang_D0,
    eval_yang_suite,
)
from eigenbound.bounds.soliton import (
    eval_expanding_annulus,
    eval_expanding_ball,
    eval_expanding_ball_gap,
    eval_rigidity_suite,
)
from eigenbound.bounds.divfree import eval_divfree_suite
from eigenbound.bounds.diagnostics import eval_mode_checks, eval_oracle_agreement
