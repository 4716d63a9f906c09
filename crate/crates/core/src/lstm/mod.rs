//! One-day-ahead close-price forecasting with a stacked LSTM regressor.
//!
//! Architecture: `recurrent_layers` LSTM layers (each followed by dropout,
//! all but the last emitting their full sequence), a ReLU dense layer and a
//! single sigmoid output unit. Prices are min-max scaled with the range of
//! the training series so the bounded output can be mapped back to prices.

mod checkpoint;
mod config;
mod data;
pub mod loss;
pub mod network;
mod optim;
mod sweep;
mod train;

pub use checkpoint::Checkpoint;
pub use config::LstmConfig;
pub use data::{make_windows, MinMaxScaler, Window};
pub use network::Params;
pub use optim::Adam;
pub use sweep::{sweep, ConfigGrid, SweepOutcome};
pub use train::{predict_path, train, EpochStats, LstmModel, TrainingReport};
