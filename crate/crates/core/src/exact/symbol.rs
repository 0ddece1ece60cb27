use std::collections::HashMap;
use std::fmt;

use super::ExactError;

/// Handle to a named symbol in a [`SymbolTable`].
///
/// The numeric id is the symbol's creation index, which also fixes its
/// position in the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Per-problem symbol universe. Symbols are never removed or renamed.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

/// Checks `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Creates a new symbol; fails if the name is malformed or already taken.
    pub fn fresh(&mut self, name: &str) -> Result<Symbol, ExactError> {
        if !is_valid_name(name) {
            return Err(ExactError::InvalidSymbolName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(ExactError::DuplicateSymbol(name.to_string()));
        }
        let sym = Symbol(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), sym);
        Ok(sym)
    }

    /// Returns the existing symbol or creates it.
    pub fn intern(&mut self, name: &str) -> Result<Symbol, ExactError> {
        match self.index.get(name) {
            Some(&s) => Ok(s),
            None => self.fresh(name),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (Symbol(i as u32), n.as_str()))
    }
}
