//! Holds the acceptance suite in `tests/acceptance.rs`. Run it with
//! `cargo test -p planar-cayley-tests --test acceptance -- --seed N`.
