//! Header and token scanning shared by the PGM reader and the PPM color
//! counter.

use crate::error::{Error, Result};

pub(crate) struct Header {
    pub magic: [u8; 2],
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
}

/// Whitespace- and `#`-comment-aware scanner over netpbm bytes.
pub(crate) struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next decimal token, or `None` at end of input.
    pub fn next_uint(&mut self) -> Option<std::result::Result<u32, String>> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let tok = &self.bytes[start..self.pos];
        Some(
            std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| format!("invalid number {:?}", String::from_utf8_lossy(tok))),
        )
    }

    /// Reads magic, width, height and maxval and consumes the single
    /// whitespace byte that separates the header from binary data.
    pub fn header(&mut self, accepted: &[&[u8; 2]]) -> Result<Header> {
        let magic = self
            .bytes
            .get(0..2)
            .ok_or_else(|| Error::MalformedHeader("missing magic number".into()))?;
        let magic = [magic[0], magic[1]];
        if !accepted.contains(&&magic) {
            return Err(Error::MalformedHeader(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(&magic)
            )));
        }
        self.pos = 2;
        let mut field = |name: &str| -> Result<u32> {
            match self.next_uint() {
                Some(Ok(v)) => Ok(v),
                Some(Err(e)) => Err(Error::MalformedHeader(format!("{name}: {e}"))),
                None => Err(Error::MalformedHeader(format!("missing {name}"))),
            }
        };
        let width = field("width")?;
        let height = field("height")?;
        let maxval = field("maxval")?;
        if width == 0 || height == 0 {
            return Err(Error::MalformedHeader(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if maxval == 0 {
            return Err(Error::MalformedHeader("maxval must be positive".into()));
        }
        if maxval > 255 {
            return Err(Error::MaxvalTooLarge(maxval));
        }
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => self.pos += 1,
            Some(_) => {
                return Err(Error::MalformedHeader(
                    "expected whitespace after maxval".into(),
                ))
            }
            None => {}
        }
        Ok(Header {
            magic,
            width: width as usize,
            height: height as usize,
            maxval,
        })
    }

    pub fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos.min(self.bytes.len())..]
    }
}
