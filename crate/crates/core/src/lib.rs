pub mod circuit;
pub mod ladder;
pub mod sim;
pub mod adder;
pub mod analysis;
pub mod io;
pub mod report;
