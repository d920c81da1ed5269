pub mod arith;
pub mod degree_one;
pub mod enumerate;
pub mod error;
pub mod invariants;
pub mod nef;
pub mod pair;
pub mod series;
pub mod smoothness;
pub mod table;
