pub mod polyring;
pub mod charvar;
pub mod poisson;
pub mod locus;
pub mod groebner;
pub mod su2dyn;
