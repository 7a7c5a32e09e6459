//! Free groups and their group algebras over a runtime coefficient domain.

mod element;
mod text;
mod word;

pub use element::{GAMatrix, GroupAlgebraElement};
pub use word::{ball, ball_size, reduce_word, Word, DEFAULT_BALL_CAP};
