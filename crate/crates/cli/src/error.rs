use thiserror::Error;
use tightwalk::cycles::CycleError;
use tightwalk::goodness::GoodnessError;
use tightwalk::matching::MatchingError;
use tightwalk::walk::WalkError;
use tightwalk::GraphError;

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

fn matching_budget(e: &MatchingError) -> bool {
    matches!(
        e,
        MatchingError::InstanceTooLarge { .. } | MatchingError::LimitExceeded { .. }
    )
}

fn walk_budget(e: &WalkError) -> bool {
    matches!(e, WalkError::BudgetExceeded(_))
}

fn classify(budget: bool, message: String) -> CliError {
    if budget {
        CliError::Budget(message)
    } else {
        CliError::Domain(message)
    }
}

impl From<CycleError> for CliError {
    fn from(e: CycleError) -> Self {
        let budget = match &e {
            CycleError::BudgetExceeded(_) => true,
            CycleError::Matching(m) => matching_budget(m),
            CycleError::Walk(w) => walk_budget(w),
            CycleError::Goodness(GoodnessError::Walk(w)) => walk_budget(w),
            _ => false,
        };
        classify(budget, e.to_string())
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        classify(matching_budget(&e), e.to_string())
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        classify(walk_budget(&e), e.to_string())
    }
}

impl From<GoodnessError> for CliError {
    fn from(e: GoodnessError) -> Self {
        let budget = matches!(&e, GoodnessError::Walk(w) if walk_budget(w));
        classify(budget, e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Domain(format!("json error: {e}"))
    }
}
