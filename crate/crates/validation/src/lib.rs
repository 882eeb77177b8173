//! Holds the `acceptance` test target. Run it with
//! `cargo test -p acmin-validation --test acceptance [-- <name filter>]`.
