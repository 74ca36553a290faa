//! Causal completions of discretized 2-D spacetimes and finite chronological
//! sets: indecomposable-set enumeration, boundary pairing, convergence
//! verdicts in the derived topologies, grid reachability for cropped
//! Minkowski scenes with polygonal obstacles, conformal-boundary anchor
//! analysis, and the example gallery driving the regression suite.

pub mod anchor;
pub mod bitset;
pub mod chronoset;
pub mod completion2d;
pub mod conformal;
pub mod corpus;
pub mod geom;
pub mod limits;
pub mod pairs;
pub mod reach;
pub mod scene;
pub mod tolerance;
