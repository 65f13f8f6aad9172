use crate::geom::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("bad-workspace: {0}")]
    BadWorkspace(String),
    #[error("coincident: circles are identical")]
    Coincident,
    #[error("broken curve at piece {0}")]
    BrokenCurve(usize),
    #[error("not-free: {0} is not in free space")]
    NotFree(Point),
    #[error("unreachable: endpoints lie in different free-space components")]
    Unreachable,
    #[error("infeasible-instance: no feasible motion plan exists")]
    Infeasible,
    #[error("invalid-rest: path endpoint {0} lies strictly inside an occupied core")]
    InvalidRest(Point),
    #[error("undefined-retraction: {0} lies inside the core")]
    UndefinedRetraction(Point),
    #[error("broken-path: robot {robot} jumps by {gap} at t = {t}")]
    BrokenPath { robot: usize, t: f64, gap: f64 },
    #[error("missing-events: pathlet {0} has no type label")]
    MissingEvents(usize),
    #[error("too-large: exact ordering supports n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("bad-cnf: {0}")]
    BadCnf(String),
    #[error("unsat-assignment: clause {0} is not satisfied")]
    UnsatAssignment(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("bad plan: {0}")]
    BadPlan(String),
    #[error("bad render options: {0}")]
    BadRender(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
