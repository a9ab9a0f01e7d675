//! PGM (P2 and P5, maxval 255) through the `image` crate.

use std::io::Cursor;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use super::GrayImage;
use crate::error::{Error, Result};

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
        .map_err(|e| Error::Io(format!("cannot decode PGM: {e}")))?;
    match img {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            GrayImage::new(w as usize, h as usize, buf.into_raw())
        }
        other => Err(Error::Parameter(format!(
            "expected an 8-bit graymap, found {:?}",
            other.color()
        ))),
    }
}

/// Encodes as P2 when `ascii`, else P5.
pub fn encode_pgm(img: &GrayImage, ascii: bool) -> Result<Vec<u8>> {
    let encoding = if ascii {
        SampleEncoding::Ascii
    } else {
        SampleEncoding::Binary
    };
    let mut out = Cursor::new(Vec::new());
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(encoding))
        .write_image(
            img.pixels(),
            img.width() as u32,
            img.height() as u32,
            ExtendedColorType::L8,
        )
        .map_err(|e| Error::Io(format!("cannot encode PGM: {e}")))?;
    Ok(out.into_inner())
}
