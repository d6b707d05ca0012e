//! Bit-string input files: ASCII `0`/`1`, with commas and whitespace ignored.

use std::fs::File;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use hamming_qubit::BitString;

use crate::error::{CliError, Result};

const CHUNK: usize = 64 * 1024;

/// Streaming reader yielding one bit per accepted byte. Memory use is one
/// fixed-size chunk regardless of input size.
pub struct BitReader<R> {
    inner: R,
    path: PathBuf,
    offset: u64,
    buf: Box<[u8]>,
    len: usize,
    pos: usize,
    done: bool,
}

impl<R: Read> BitReader<R> {
    pub fn new(inner: R, path: impl Into<PathBuf>) -> Self {
        Self {
            inner,
            path: path.into(),
            offset: 0,
            buf: vec![0; CHUNK].into_boxed_slice(),
            len: 0,
            pos: 0,
            done: false,
        }
    }

    fn refill(&mut self) -> io::Result<usize> {
        loop {
            match self.inner.read(&mut self.buf) {
                Ok(n) => {
                    self.len = n;
                    self.pos = 0;
                    return Ok(n);
                }
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e),
            }
        }
    }
}

impl BitReader<File> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        Ok(Self::new(file, path))
    }
}

impl<R: Read> Iterator for BitReader<R> {
    type Item = Result<bool>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            if self.pos == self.len {
                match self.refill() {
                    Ok(0) => {
                        self.done = true;
                        return None;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        self.done = true;
                        return Some(Err(CliError::io(self.path.display().to_string(), e)));
                    }
                }
            }
            let byte = self.buf[self.pos];
            let offset = self.offset;
            self.pos += 1;
            self.offset += 1;
            match byte {
                b'0' => return Some(Ok(false)),
                b'1' => return Some(Ok(true)),
                b',' | b' ' | b'\t' | b'\n' | b'\r' => {}
                byte => {
                    self.done = true;
                    return Some(Err(CliError::Parse {
                        path: self.path.clone(),
                        offset,
                        byte,
                    }));
                }
            }
        }
        None
    }
}

/// Read a whole bit-string file into memory.
pub fn parse_bitstring_file(path: &Path) -> Result<BitString> {
    parse_bits(BitReader::open(path)?)
}

/// Collect a reader's bits, rejecting inputs with no bits at all.
pub fn parse_bits<R: Read>(reader: BitReader<R>) -> Result<BitString> {
    let path = reader.path.clone();
    let bits: BitString = reader.collect::<Result<_>>()?;
    if bits.is_empty() {
        return Err(CliError::EmptyInput(path));
    }
    Ok(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<BitString> {
        parse_bits(BitReader::new(s.as_bytes(), "<mem>"))
    }

    #[test]
    fn accepts_separators() {
        assert_eq!(
            parse("1,1,0,0,1,0,1").unwrap(),
            BitString::from_01("1100101").unwrap()
        );
        assert_eq!(parse("0\n1\n").unwrap(), BitString::from_01("01").unwrap());
        assert_eq!(
            parse(" 1\t0\r\n").unwrap(),
            BitString::from_01("10").unwrap()
        );
    }

    #[test]
    fn reports_offset_of_bad_byte() {
        match parse("01x") {
            Err(CliError::Parse { offset, byte, .. }) => assert_eq!((offset, byte), (2, b'x')),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse(""), Err(CliError::EmptyInput(_))));
        assert!(matches!(parse(" ,\n"), Err(CliError::EmptyInput(_))));
    }

    #[test]
    fn offsets_across_chunks() {
        let mut s = "1".repeat(CHUNK + 10);
        s.push('2');
        match parse(&s) {
            Err(CliError::Parse { offset, .. }) => assert_eq!(offset, (CHUNK + 10) as u64),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io() {
        let e = parse_bitstring_file(Path::new("/nonexistent/bits.txt")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
