use crate::error::{Error, Result};

pub const LEFT_END: char = '<';
pub const RIGHT_END: char = '>';

pub fn is_end_marker(c: char) -> bool {
    c == LEFT_END || c == RIGHT_END
}

/// Read-only input tape bordered by end-markers.
///
/// Position 0 holds the left end-marker, positions `1..=n` the input and
/// position `n + 1` the right end-marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<char>,
}

impl Tape {
    pub fn new(input: &[char]) -> Result<Self> {
        if let Some(&c) = input.iter().find(|c| is_end_marker(**c)) {
            return Err(Error::ReservedSymbol(c));
        }
        let mut cells = Vec::with_capacity(input.len() + 2);
        cells.push(LEFT_END);
        cells.extend_from_slice(input);
        cells.push(RIGHT_END);
        Ok(Tape { cells })
    }

    /// Input length `n`.
    pub fn len(&self) -> usize {
        self.cells.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the right end-marker.
    pub fn last(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn read(&self, pos: usize) -> char {
        self.cells[pos]
    }

    pub fn get(&self, pos: i64) -> Option<char> {
        if pos < 0 {
            None
        } else {
            self.cells.get(pos as usize).copied()
        }
    }

    pub fn cells(&self) -> &[char] {
        &self.cells
    }

    pub fn input(&self) -> &[char] {
        &self.cells[1..self.cells.len() - 1]
    }
}

impl std::str::FromStr for Tape {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        Self::new(&input.chars().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_cover_end_markers() {
        let t = "ab".parse::<Tape>().unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.read(0), LEFT_END);
        assert_eq!(t.read(1), 'a');
        assert_eq!(t.read(3), RIGHT_END);
        assert_eq!(t.last(), 3);
        assert_eq!(t.get(-1), None);
        assert_eq!(t.get(4), None);
    }

    #[test]
    fn end_markers_are_reserved() {
        assert_eq!("a<b".parse::<Tape>(), Err(Error::ReservedSymbol('<')));
        assert!("".parse::<Tape>().unwrap().is_empty());
    }
}
