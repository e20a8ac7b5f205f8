//! Symbolic calculus of arborescent tangles: rational tangles as fractions,
//! Conway sums and products, the `Q_n` family, normalization, essential
//! surface classification and closure into links.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod fraction;
pub mod link;
pub mod parse;
pub mod pd;
pub mod rewrite;
pub mod validate;

pub use classify::{
    census, classify, conway_disks, Reason, Status, SurfaceCensus, SurfaceRecord, Verdict,
};
pub use corpus::{
    build_records, enumerate, read_jsonl, run_invariant_suite, write_jsonl, CorpusRecord,
    SuiteReport,
};
pub use error::{Error, Result};
pub use expr::{Axis, AxisMatch, Expr, GluingMap, LinkExpr, Path, Step, TangleExpr};
pub use fraction::{Fraction, TwoBridgeForm, TwoBridgeKind};
pub use link::{
    canon_montesinos, classify_large_link, classify_link, classify_montesinos, classify_two_bridge,
    is_torus_montesinos, LinkReason, LinkReport, Location, MontesinosForm, OertelLink, TorusFamily,
};
pub use parse::{parse, parse_link, parse_tangle};
pub use pd::{export_pd, export_pd_expr, PdCode};
pub use rewrite::{
    is_normal, is_rational_expr, length_estimate, max_q, normalize, normalize_shuffled,
    normalize_unchecked, qsplit, NormalForm, QSplit, Rule, TraceStep,
};
pub use validate::{is_valid, validate, Violation, ViolationKind};
