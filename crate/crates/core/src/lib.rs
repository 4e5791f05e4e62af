pub mod exactla;
pub mod poset;
pub mod projinj;
pub mod cli;
pub mod exactcat;
pub mod rep;
pub mod unfam;
