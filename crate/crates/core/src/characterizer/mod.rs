//! Expected profiles, the counting lemmas, line-type checks and the
//! classification of point sets against the classical polar spaces.

mod battery;
mod classify;
mod expected;
mod fit;
mod lines;
pub mod rational;
mod report;
mod sizes;

pub use battery::{
    dual_from_sizes, dual_tangent_set, hyperplane_section, parabolic_codim3_analysis, parse_lemmas, verify,
    Codim3Report, Lemma,
};
pub use classify::{candidates, classify, Classification};
pub use expected::{expected_profile, parabolic_mij, CodimTwoType, ExpectedProfile};
pub use fit::{fit_quadric, is_quadric_pointset, quadric_kernel_dim};
pub use lines::{
    check_hermitian_line_conditions, check_quadric_line_conditions, check_shult, HermitianLineReport, QuadricCase,
    QuadricLineReport, ShultReport,
};
pub use report::{CountingReport, ReportEntry, Verdict};
pub use sizes::{parabolic_size_analysis, solve_size_equations, KValue, ParabolicSizeAnalysis, SizeEquationSolution};
