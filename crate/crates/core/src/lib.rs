//! A seedable simulator of a client-consultant information market on top of a
//! small abstract-argumentation engine.
//!
//! Knowledge is modelled as prefixes of the chain `A_1 <- A_2 <- ...`;
//! consultants either buy every new argument (well-informed) or only enough to
//! stay one step ahead of their current client (ill-informed). Clients pick
//! consultants by price and reputation, and [`sweep`] runs whole parameter
//! grids into a CSV of per-strategy profit statistics.

pub mod argumentation;
pub mod cli;
pub mod market;
pub mod reputation;
pub mod sim;
pub mod sweep;
