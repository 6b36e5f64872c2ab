//! Tuple documents (in progress).
