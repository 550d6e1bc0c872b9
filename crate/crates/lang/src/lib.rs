//! Language packs for skelsem: the base While language with interval
//! abstractions, and its extension with exceptions, streams and a heap.

pub mod domain;
pub mod ext;
pub mod filters;
pub mod json;
pub mod sample;
mod show;
pub mod syntax;
pub mod value;
pub mod while_lang;

pub use domain::{Abs, Domains};
pub use ext::ext_while_language;
pub use syntax::{parse_program, parse_stmt, print, Dialect, SyntaxError};
pub use value::{Val, Value};
pub use while_lang::while_language;

use skelsem_core::Language;

/// Language and surface dialect selected by a command-line name.
pub fn by_name(lang: &str) -> Option<(Language<Domains>, Dialect)> {
    match lang {
        "while" => Some((while_language(), Dialect::While)),
        "while-ext" => Some((ext_while_language(), Dialect::Ext)),
        _ => None,
    }
}
