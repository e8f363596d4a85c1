pub mod error;
pub mod exactnum;
pub mod numfield;
pub mod approx;
pub mod unitgrp;
pub mod twistform;
pub mod effective;
pub mod report;

pub use error::{Error, Result};
