//! Exact dyadic arithmetic and outward-rounded interval/box arithmetic.

mod dyadic;
mod interval;

pub use dyadic::{Dyadic, Rounding};
pub use interval::{
    abs_interval, bit_magnitude, bit_magnitude_interval, BitMagnitude, ComplexBox,
    DyadicInterval,
};
