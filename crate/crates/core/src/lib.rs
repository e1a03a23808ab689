//! Counting-quantifier constraint satisfaction: a brute-force game oracle,
//! polynomial-time deciders for tractable fragments, a complexity
//! classifier, and executable hardness reductions.

pub mod fastpath;
pub mod model;
pub mod modarith;
pub mod oracle;
pub mod reduce;
pub mod textio;
