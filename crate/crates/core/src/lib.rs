pub mod codec;
pub mod commit;
pub mod group;
pub mod hash;
pub mod params;
pub mod sig;
pub mod zk;
pub mod board;
pub mod actors;
pub mod harness;
