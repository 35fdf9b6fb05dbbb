//! Non-uniform online learning: exact Littlestone dimension, mistake-bounded
//! learners, follow-the-perturbed-leader over countable expert pools, and
//! the adversaries used to stress them.

pub mod hypothesis;
pub mod littlestone;
pub mod learners;
pub mod fpl;
pub mod nature;
pub mod runner;
