pub mod beables;
pub mod cascade;
pub mod classical;
pub mod g2;
pub mod photodetect;
