pub mod optim;
pub mod quadrature;
pub mod roots;
pub mod stats;
