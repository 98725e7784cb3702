//! Holds the `acceptance` test target: `cargo test -p psmom-validation --test acceptance`.
