//! Binary PPM (P6) and PBM (P4) encoding.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// 8-bit RGB image, row-major, top row first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0; 3 * width * height],
        }
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set_pixel(&mut self, row: usize, col: usize, rgb: [u8; 3]) {
        let i = 3 * (row * self.width + col);
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&self.to_ppm())
    }

    pub fn read_ppm<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf).map_err(|e| Error::Format(e.to_string()))?;
        let (magic, dims, body) = parse_header(&buf, 3)?;
        if magic != "P6" || dims[2] != 255 {
            return Err(Error::Format("expected 8-bit P6".into()));
        }
        let (width, height) = (dims[0], dims[1]);
        let body = body
            .get(..3 * width * height)
            .ok_or_else(|| Error::Format("truncated P6 data".into()))?;
        Ok(Self {
            width,
            height,
            data: body.to_vec(),
        })
    }
}

/// Encodes a bit mask as P4: set bits are black (1), rows are MSB-first and byte-padded.
pub fn encode_pbm(width: usize, height: usize, bits: &[bool]) -> Vec<u8> {
    assert_eq!(bits.len(), width * height);
    let mut out = format!("P4\n{width} {height}\n").into_bytes();
    let stride = width.div_ceil(8);
    for row in bits.chunks(width.max(1)).take(height) {
        let mut line = vec![0u8; stride];
        for (c, &b) in row.iter().enumerate() {
            if b {
                line[c / 8] |= 0x80 >> (c % 8);
            }
        }
        out.extend_from_slice(&line);
    }
    out
}

pub fn decode_pbm(buf: &[u8]) -> Result<(usize, usize, Vec<bool>)> {
    let (magic, dims, body) = parse_header(buf, 2)?;
    if magic != "P4" {
        return Err(Error::Format("expected P4".into()));
    }
    let (width, height) = (dims[0], dims[1]);
    let stride = width.div_ceil(8);
    if body.len() < stride * height {
        return Err(Error::Format("truncated P4 data".into()));
    }
    let mut bits = Vec::with_capacity(width * height);
    for r in 0..height {
        let line = &body[r * stride..(r + 1) * stride];
        bits.extend((0..width).map(|c| line[c / 8] & (0x80 >> (c % 8)) != 0));
    }
    Ok((width, height, bits))
}

/// Splits a PNM header into magic, `count` integers, and the binary body.
fn parse_header(buf: &[u8], count: usize) -> Result<(String, Vec<usize>, &[u8])> {
    let mut pos = 0;
    let mut tokens = Vec::new();
    while tokens.len() < count + 1 {
        while pos < buf.len() && (buf[pos].is_ascii_whitespace() || buf[pos] == b'#') {
            if buf[pos] == b'#' {
                while pos < buf.len() && buf[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < buf.len() && !buf[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated header".into()));
        }
        tokens.push(String::from_utf8_lossy(&buf[start..pos]).into_owned());
    }
    // exactly one whitespace byte separates the header from the data
    pos += 1;
    let magic = tokens.remove(0);
    let dims = tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Format(format!("bad header value {t}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((magic, dims, buf.get(pos..).unwrap_or(&[])))
}
