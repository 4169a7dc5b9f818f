pub mod expr;
pub mod output;
pub mod problem;
pub mod run;
