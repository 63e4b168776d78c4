pub mod ceva;
pub mod cones;
pub mod diagrams;
pub mod error;
pub mod finlat;
pub mod lp;
pub mod lterm;
pub mod psbool;
pub mod ratcore;
