//! Core dynamics for the two-ensemble attraction/repulsion flocking system.
//!
//! Two groups of agents align within their own group (attractive coupling
//! `kappa_s`) while being driven apart from the other group (repulsive
//! coupling `kappa_d`), optionally subject to a Rayleigh-type friction that
//! relaxes speeds towards unity. This crate holds everything that is pure
//! computation: the right-hand side of the ODE system, a fixed-step RK4
//! integrator, trajectory diagnostics, closed-form oracles for the small
//! systems that admit exact solutions, and certificate monitors that check
//! the flocking/dispersion estimates along computed trajectories.
//!
//! The crate is `no_std` (with `alloc`); all transcendental functions go
//! through `libm` so results are bit-identical across platforms. File
//! formats, the CLI, and random initial-condition generation live in the
//! companion `bicluster` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod certificates;
pub mod diagnostics;
pub mod integrator;
pub mod model;
pub mod oracles;

pub(crate) mod quadrature;
