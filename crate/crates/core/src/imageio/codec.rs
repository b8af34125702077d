use std::fs;
use std::io::{Cursor, Write};
use std::path::Path;

use super::GrayImage;
use crate::error::{Result, ScootError};

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

/// Broadcast luma, `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

/// Loads a binary PGM (P5, maxval 255) or an 8-bit gray/RGB PNG.
///
/// The format is chosen from the file's magic bytes, not its extension.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| ScootError::io(path, e))?;
    if bytes.starts_with(&PNG_SIGNATURE) {
        read_png(&bytes, path)
    } else if bytes.starts_with(b"P5") {
        read_pgm(&bytes, path)
    } else {
        Err(ScootError::decode(
            path,
            "not a binary PGM (P5) or PNG file",
        ))
    }
}

/// Parses a P5 PGM from memory. `path` is only used in error values.
pub fn read_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    if !bytes.starts_with(b"P5") {
        return Err(ScootError::decode(path, "missing P5 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and `#` comments may separate header tokens
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(ScootError::decode(path, "truncated PGM header"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ScootError::decode(path, "PGM header value out of range"))?;
    }
    let [width, height, maxval] = fields;
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(ScootError::decode(path, "malformed PGM header"));
    }
    pos += 1;
    if maxval > 255 {
        return Err(ScootError::UnsupportedBitDepth {
            path: path.to_path_buf(),
            depth: 16,
        });
    }
    if maxval != 255 {
        return Err(ScootError::decode(
            path,
            format!("PGM maxval {maxval} is not supported (expected 255)"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(ScootError::ZeroDimension {
            path: path.to_path_buf(),
        });
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| ScootError::decode(path, "PGM dimensions overflow"))?;
    let data = bytes
        .get(pos..pos + len)
        .ok_or_else(|| ScootError::decode(path, "PGM pixel data is truncated"))?;
    GrayImage::new(width, height, data.to_vec())
}

/// Serializes `img` as P5 PGM with maxval 255.
pub fn write_pgm(img: &GrayImage, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", img.width(), img.height())?;
    out.write_all(img.pixels())?;
    out.flush()
}

pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::with_capacity(img.pixels().len() + 32);
    write_pgm(img, &mut buf).map_err(|e| ScootError::io(path, e))?;
    fs::write(path, buf).map_err(|e| ScootError::io(path, e))
}

fn read_png(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| ScootError::decode(path, e.to_string()))?;
    let (width, height) = {
        let info = reader.info();
        (info.width as usize, info.height as usize)
    };
    if width == 0 || height == 0 {
        return Err(ScootError::ZeroDimension {
            path: path.to_path_buf(),
        });
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| ScootError::decode(path, "PNG frame too large"))?;
    let mut buf = vec![0; size];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| ScootError::decode(path, e.to_string()))?;
    if frame.bit_depth != png::BitDepth::Eight {
        return Err(ScootError::UnsupportedBitDepth {
            path: path.to_path_buf(),
            depth: frame.bit_depth as u32,
        });
    }
    let channels = match frame.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => {
            return Err(ScootError::decode(path, "indexed PNG is not supported"))
        }
    };
    let mut pixels = Vec::with_capacity(width * height);
    for row in buf[..frame.buffer_size()].chunks_exact(frame.line_size) {
        for px in row[..width * channels].chunks_exact(channels) {
            // alpha, when present, is ignored
            pixels.push(if channels < 3 {
                px[0]
            } else {
                luma(px[0], px[1], px[2])
            });
        }
    }
    GrayImage::new(width, height, pixels)
}
