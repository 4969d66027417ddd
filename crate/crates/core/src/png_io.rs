//! Thin PNG layer with pinned encoder settings so identical pixels always
//! produce identical bytes.

use std::io::Cursor;
use std::path::Path;

use png::{BitDepth, ColorType, Transformations};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PngColor {
    Gray,
    Rgb,
}

pub(crate) struct DecodedPng {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

pub(crate) fn encode(width: usize, height: usize, color: PngColor, data: &[u8]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width as u32, height as u32);
        enc.set_color(match color {
            PngColor::Gray => ColorType::Grayscale,
            PngColor::Rgb => ColorType::Rgb,
        });
        enc.set_depth(BitDepth::Eight);
        enc.set_compression(png::Compression::Balanced);
        enc.set_filter(png::Filter::Adaptive);
        let mut writer = enc.write_header()?;
        writer.write_image_data(data)?;
        writer.finish()?;
    }
    Ok(out)
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Decodes to 8-bit gray or RGB. Palettes are expanded, alpha is dropped,
/// 16-bit input is rejected.
pub(crate) fn decode_normalized(bytes: &[u8]) -> Result<DecodedPng> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(Transformations::EXPAND);
    let mut reader = decoder.read_info()?;
    if reader.info().bit_depth == BitDepth::Sixteen {
        return Err(Error::UnsupportedPng("16-bit samples".into()));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedPng("image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf)?;
    buf.truncate(info.buffer_size());
    let (w, h) = (info.width as usize, info.height as usize);
    let (channels, data) = match info.color_type {
        ColorType::Grayscale => (1, compact(buf, info.line_size, w, 1, 1)),
        ColorType::GrayscaleAlpha => (1, compact(buf, info.line_size, w, 2, 1)),
        ColorType::Rgb => (3, compact(buf, info.line_size, w, 3, 3)),
        ColorType::Rgba => (3, compact(buf, info.line_size, w, 4, 3)),
        ColorType::Indexed => return Err(Error::UnsupportedPng("unexpanded palette".into())),
    };
    debug_assert_eq!(data.len(), w * h * channels);
    Ok(DecodedPng {
        width: w,
        height: h,
        channels,
        data,
    })
}

/// Decodes a single-channel PNG without any value scaling: grayscale samples
/// and palette indices come back as stored. Used for class-index labels.
pub(crate) fn decode_raw_indices(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>)> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(Transformations::IDENTITY);
    let mut reader = decoder.read_info()?;
    let (color, depth) = {
        let info = reader.info();
        (info.color_type, info.bit_depth)
    };
    if !matches!(color, ColorType::Grayscale | ColorType::Indexed) {
        return Err(Error::UnsupportedPng(format!(
            "label PNG must be grayscale or indexed, got {color:?}"
        )));
    }
    let bits = match depth {
        BitDepth::One => 1,
        BitDepth::Two => 2,
        BitDepth::Four => 4,
        BitDepth::Eight => 8,
        BitDepth::Sixteen => return Err(Error::UnsupportedPng("16-bit label".into())),
    };
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::UnsupportedPng("image too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf)?;
    let (w, h) = (info.width as usize, info.height as usize);
    let mut data = Vec::with_capacity(w * h);
    for row in buf.chunks(info.line_size).take(h) {
        if bits == 8 {
            data.extend_from_slice(&row[..w]);
            continue;
        }
        let per_byte = 8 / bits;
        let mask = (1u8 << bits) - 1;
        for x in 0..w {
            let byte = row[x / per_byte];
            let shift = 8 - bits * (x % per_byte + 1);
            data.push((byte >> shift) & mask);
        }
    }
    Ok((w, h, data))
}

fn compact(buf: Vec<u8>, line_size: usize, width: usize, src_ch: usize, dst_ch: usize) -> Vec<u8> {
    if src_ch == dst_ch && line_size == width * src_ch {
        return buf;
    }
    let mut out = Vec::with_capacity(buf.len() / src_ch * dst_ch);
    for row in buf.chunks(line_size) {
        for px in row[..width * src_ch].chunks_exact(src_ch) {
            out.extend_from_slice(&px[..dst_ch]);
        }
    }
    out
}
