//! Instance generators: per-round perturbations, the parallel-edge hard
//! family, and synthetic base problems (grids, auctions, planted strings).

mod auction;
mod grid;
mod perturb;
mod strings;
mod tight;

pub use auction::{objective_sequence, synth_auction_lp, AuctionLp, AuctionParams, Bid, BundleSize, MAX_REDRAWS};
pub use grid::{grid_vertex, synth_grid_graph};
pub use perturb::{perturb_objective_gaussian, perturb_weights_gaussian, perturb_weights_uniform, PerturbationSpec};
pub use strings::{synth_search_sequence, SearchWorkload};
pub use tight::tight_construction;
