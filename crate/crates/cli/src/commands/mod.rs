pub mod cayley;
pub mod legendre;
pub mod tdelta;
pub mod weyl;
