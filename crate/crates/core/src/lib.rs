#![allow(clippy::needless_range_loop)]

//! Complexified Cayley-Dickson algebras, their structure constants, and the
//! double-dual gravitational Lagrangians built from them.

pub mod action;
pub mod algebra;
pub mod frame;
pub mod geometry;
pub mod parallel;
pub mod scenarios;
pub mod tables;
pub mod verify;
