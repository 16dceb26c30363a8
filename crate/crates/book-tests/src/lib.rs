//! Doc-tests for the book: each chapter of `book/src` is included here as
//! module documentation, so every fenced Rust snippet in the guide is
//! compiled and run by `cargo test`. A book example that drifts from the
//! library API fails the build.

// (chapters are attached as the book is written)
