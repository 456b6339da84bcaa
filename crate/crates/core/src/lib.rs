//! Algebraic-geometric block turbo codes over GF(16).
//!
//! The component code is a one-point code on the Hermitian curve
//! `y^4 + y = x^5` (64 rational points, genus 6). On top of it sit an
//! irregular repeat/interleave turbo scheme ([`ibtc`]) and a regular product
//! code ([`btc`]), both decoded with a symbol-level Chase search
//! ([`siso`]). [`sim`] measures BER over Rayleigh fast fading with
//! BPSK through 64QAM.
//!
//! Soft-decision types are generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below name the common instantiations.

pub mod btc;
pub mod channel;
pub mod error;
pub mod galois;
pub mod hermitian;
pub mod ibtc;
pub mod linalg;
pub mod modem;
pub mod scalar;
pub mod seed;
pub mod siso;
pub mod sim;

pub use error::{Error, Result};
pub use galois::Gf16;
pub use hermitian::{build_code, AgCode, CodeId, Codeword};
pub use scalar::Real;

pub type Reliability = siso::SymbolReliability<f64>;
pub type Reliability32 = siso::SymbolReliability<f32>;
pub type Word = siso::SoftWord<f64>;
pub type Word32 = siso::SoftWord<f32>;
pub type IbtcState = ibtc::DecoderState<f64>;
pub type IbtcState32 = ibtc::DecoderState<f32>;
