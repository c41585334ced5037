pub mod decluster;
pub mod fit;
pub mod levels;
pub mod risk;
pub mod simulate;
