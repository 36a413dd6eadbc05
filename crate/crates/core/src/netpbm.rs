//! Plain PBM (`P1`) and PPM (`P3`) images.
//!
//! Pixel `(x, y)` is column `x` and row `y` of the raster, with row 0 first
//! in the file. A PBM `1` marks a pixel inside the set.

use std::sync::Arc;

use crate::complex::{BinarySet, CubicalComplex};
use crate::error::{Error, Result};

/// Header and raster scanner that skips whitespace and `#` comments.
struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
        }
    }

    fn skip(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            match b {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => return,
            }
        }
    }

    fn token(&mut self) -> Option<&'a str> {
        self.skip();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or(""))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let line = self.line;
        let tok = self
            .token()
            .ok_or_else(|| Error::parse(self.line, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("{what} must be a nonnegative integer, got `{tok}`")))
    }

    /// One raster bit; plain PBM allows the digits to run together.
    fn bit(&mut self) -> Result<bool> {
        self.skip();
        match self.bytes.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            Some(&b) => Err(Error::parse(self.line, format!("unexpected byte `{}` in raster", b as char))),
            None => Err(Error::parse(self.line, "raster is truncated")),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip();
        self.pos >= self.bytes.len()
    }
}

/// A black and white raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, `true` = 1.
    pub bits: Vec<bool>,
}

impl Bitmap {
    pub fn parse(text: &str) -> Result<Bitmap> {
        let mut sc = Scanner::new(text);
        match sc.token() {
            Some("P1") => {}
            Some(other) => return Err(Error::parse(1, format!("expected plain PBM magic `P1`, got `{other}`"))),
            None => return Err(Error::parse(1, "empty image")),
        }
        let width = sc.number("width")?;
        let height = sc.number("height")?;
        if width == 0 || height == 0 {
            return Err(Error::parse(sc.line, "image dimensions must be positive"));
        }
        let mut bits = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            bits.push(sc.bit()?);
        }
        if !sc.at_end() {
            return Err(Error::parse(sc.line, "trailing data after raster"));
        }
        Ok(Bitmap { width, height, bits })
    }

    pub fn from_set(set: &BinarySet) -> Result<Bitmap> {
        let cx = set.complex();
        if cx.dimension() != 2 {
            return Err(Error::Unsupported("only planar sets can be written as images".into()));
        }
        let (width, height) = (cx.extent()[0], cx.extent()[1]);
        let mut bits = vec![false; width * height];
        for c in set.cells() {
            bits[c.coords[1] * width + c.coords[0]] = true;
        }
        Ok(Bitmap { width, height, bits })
    }

    /// The set of 1-pixels on a fresh non-periodic grid of the image size.
    pub fn to_set(&self) -> Result<BinarySet> {
        let cx = CubicalComplex::grid2(self.width, self.height)?;
        self.to_set_on(&cx)
    }

    pub fn to_set_on(&self, cx: &Arc<CubicalComplex>) -> Result<BinarySet> {
        if cx.dimension() != 2 || cx.extent() != [self.width, self.height] {
            return Err(Error::InvalidParameter(format!(
                "a {}x{} image does not match {}",
                self.width,
                self.height,
                cx.describe()
            )));
        }
        let w = self.width;
        Ok(BinarySet::from_fn(cx, |[x, y, _]| self.bits[y * w + x]))
    }

    /// Plain PBM with at most 70 characters per line.
    pub fn write(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for row in self.bits.chunks(self.width) {
            for (i, chunk) in row.chunks(35).enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let line: Vec<&str> = chunk.iter().map(|&b| if b { "1" } else { "0" }).collect();
                out.push_str(&line.join(" "));
            }
            out.push('\n');
        }
        out
    }
}

pub type Rgb = [u8; 3];

/// A colour raster, written as plain PPM with maxval 255.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pixmap {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl Pixmap {
    pub fn filled(width: usize, height: usize, colour: Rgb) -> Pixmap {
        Pixmap {
            width,
            height,
            pixels: vec![colour; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, colour: Rgb) {
        if x < self.width && y < self.height {
            self.pixels[y * self.width + x] = colour;
        }
    }

    pub fn parse(text: &str) -> Result<Pixmap> {
        let mut sc = Scanner::new(text);
        match sc.token() {
            Some("P3") => {}
            Some(other) => return Err(Error::parse(1, format!("expected plain PPM magic `P3`, got `{other}`"))),
            None => return Err(Error::parse(1, "empty image")),
        }
        let width = sc.number("width")?;
        let height = sc.number("height")?;
        let maxval = sc.number("maxval")?;
        if maxval != 255 {
            return Err(Error::parse(sc.line, format!("only maxval 255 is supported, got {maxval}")));
        }
        let mut pixels = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let mut px = [0u8; 3];
            for c in &mut px {
                let v = sc.number("sample")?;
                *c = u8::try_from(v).map_err(|_| Error::parse(sc.line, format!("sample {v} exceeds maxval")))?;
            }
            pixels.push(px);
        }
        if !sc.at_end() {
            return Err(Error::parse(sc.line, "trailing data after raster"));
        }
        Ok(Pixmap { width, height, pixels })
    }

    pub fn write(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            for (i, chunk) in row.chunks(5).enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let line: Vec<String> = chunk.iter().map(|p| format!("{} {} {}", p[0], p[1], p[2])).collect();
                out.push_str(&line.join("  "));
            }
            out.push('\n');
        }
        out
    }
}
