//! Grayscale images and rank-k compression of their pixel matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, reconstruct, svd, truncate, DenseMatrix};
use crate::netpbm::Scanner;

/// Row-major 8-bit luminance grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::InvalidDimensions {
                rows: height,
                cols: width,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Pixels as a `height × width` real matrix.
    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::new(
            self.height,
            self.width,
            self.pixels.iter().map(|&p| f64::from(p)).collect(),
        )
        .expect("image dimensions are positive")
    }

    /// Rounds half away from zero and clamps to `0..=255`.
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        let pixels = m
            .values()
            .iter()
            .map(|v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        Self {
            width: m.cols(),
            height: m.rows(),
            pixels,
        }
    }
}

/// Parses binary (P5) or ASCII (P2) PGM with `maxval <= 255`. Sample values
/// are kept as stored; they are not rescaled to 255.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut scan = Scanner::new(bytes);
    let header = scan.header(&[b"P2", b"P5"])?;
    let expected = header.width * header.height;
    let mut pixels = Vec::with_capacity(expected);
    if &header.magic == b"P5" {
        let data = scan.rest();
        if data.len() < expected {
            return Err(Error::TruncatedPixelData {
                expected,
                found: data.len(),
            });
        }
        pixels.extend_from_slice(&data[..expected]);
        if let Some(&value) = pixels.iter().find(|&&p| u32::from(p) > header.maxval) {
            return Err(Error::PixelOutOfRange {
                value: value.into(),
                maxval: header.maxval,
            });
        }
    } else {
        while pixels.len() < expected {
            match scan.next_uint() {
                Some(Ok(value)) if value > header.maxval => {
                    return Err(Error::PixelOutOfRange {
                        value,
                        maxval: header.maxval,
                    })
                }
                Some(Ok(value)) => pixels.push(value as u8),
                Some(Err(e)) => return Err(Error::MalformedHeader(format!("pixel data: {e}"))),
                None => {
                    return Err(Error::TruncatedPixelData {
                        expected,
                        found: pixels.len(),
                    })
                }
            }
        }
    }
    GrayImage::new(header.width, header.height, pixels)
}

/// Canonical binary PGM: `P5 <width> <height> 255\n` followed by the pixels.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5 {} {} 255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionReport {
    pub k: usize,
    /// `‖A − A_k‖_F / ‖A‖_F` on the unrounded reconstruction.
    pub rel_frobenius_error: f64,
    /// `Σ_{i≤k} σ_i² / Σ_i σ_i²`.
    pub energy_retained: f64,
}

impl CompressionReport {
    pub const TSV_HEADER: &'static str = "k\trel_frobenius_error\tenergy_retained";
}

impl fmt::Display for CompressionReport {
    /// One TSV row: `k<TAB>rel_frobenius_error<TAB>energy_retained`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{:.6}\t{:.6}",
            self.k, self.rel_frobenius_error, self.energy_retained
        )
    }
}

/// Rank-`k` approximation of the image's pixel matrix.
pub fn compress_image(img: &GrayImage, k: usize) -> Result<(GrayImage, CompressionReport)> {
    let max = img.width.min(img.height);
    if k == 0 || k > max {
        return Err(Error::RankOutOfRange { k, max });
    }
    let a = img.to_matrix();
    let factors = svd(&a)?;
    let approx = reconstruct(&truncate(&factors, k)?);

    let total: f64 = factors.sigma().iter().map(|s| s * s).sum();
    let kept: f64 = factors.sigma()[..k].iter().map(|s| s * s).sum();
    let norm = a.frobenius_norm();
    let report = CompressionReport {
        k,
        rel_frobenius_error: if norm == 0.0 {
            0.0
        } else {
            frobenius_distance(&a, &approx)? / norm
        },
        energy_retained: if total == 0.0 { 1.0 } else { kept / total },
    };
    Ok((GrayImage::from_matrix(&approx), report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_ascii_checker() {
        let img = read_pgm(b"P2 2 2 255\n0 255 255 0\n").unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0, 255, 255, 0]);
    }

    #[test]
    fn reads_comments() {
        let img = read_pgm(b"P2\n# made by hand\n2 1 # dims\n15\n3 # first\n 15\n").unwrap();
        assert_eq!(img.pixels(), &[3, 15]);
    }

    #[test]
    fn truncated_binary() {
        let err = read_pgm(b"P5 2 2 255\n\x01\x02").unwrap_err();
        assert_eq!(
            err,
            Error::TruncatedPixelData {
                expected: 4,
                found: 2
            }
        );
        let err = read_pgm(b"P2 2 2 255\n1 2 3").unwrap_err();
        assert_eq!(
            err,
            Error::TruncatedPixelData {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn header_errors_are_distinct() {
        assert_eq!(
            read_pgm(b"P5 2 2 65535\n").unwrap_err(),
            Error::MaxvalTooLarge(65535)
        );
        assert!(matches!(
            read_pgm(b"P6 1 1 255\n").unwrap_err(),
            Error::MalformedHeader(_)
        ));
        assert!(matches!(
            read_pgm(b"P5 x 1 255\n").unwrap_err(),
            Error::MalformedHeader(_)
        ));
        assert!(matches!(
            read_pgm(b"P5 1").unwrap_err(),
            Error::MalformedHeader(_)
        ));
        assert!(matches!(
            read_pgm(b"").unwrap_err(),
            Error::MalformedHeader(_)
        ));
        assert_eq!(
            read_pgm(b"P2 1 1 10\n11\n").unwrap_err(),
            Error::PixelOutOfRange {
                value: 11,
                maxval: 10
            }
        );
    }

    #[test]
    fn canonical_one_pixel_output() {
        let img = GrayImage::new(1, 1, vec![0]).unwrap();
        let bytes = write_pgm(&img);
        // "P5 1 1 255\n" is 11 bytes, plus one sample.
        assert_eq!(bytes.len(), 12);
        assert_eq!(&bytes[..], b"P5 1 1 255\n\0");
    }

    #[test]
    fn constant_image_is_rank_one() {
        let img = GrayImage::new(5, 4, vec![137; 20]).unwrap();
        let (out, report) = compress_image(&img, 1).unwrap();
        assert_eq!(out, img);
        assert!(report.rel_frobenius_error < 1e-12);
        assert!((report.energy_retained - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_out_of_range() {
        let img = GrayImage::new(3, 2, vec![1; 6]).unwrap();
        assert_eq!(
            compress_image(&img, 3).unwrap_err(),
            Error::RankOutOfRange { k: 3, max: 2 }
        );
        assert!(compress_image(&img, 0).is_err());
    }

    #[test]
    fn black_image() {
        let img = GrayImage::new(3, 3, vec![0; 9]).unwrap();
        let (out, report) = compress_image(&img, 2).unwrap();
        assert_eq!(out, img);
        assert_eq!(report.rel_frobenius_error, 0.0);
        assert_eq!(report.energy_retained, 1.0);
    }

    #[test]
    fn rounding_and_clamping() {
        let m = DenseMatrix::from_rows(&[[-3.0, 0.5, 1.49], [254.5, 300.0, 2.5]]).unwrap();
        assert_eq!(GrayImage::from_matrix(&m).pixels(), &[0, 1, 1, 255, 255, 3]);
    }

    #[test]
    fn report_row_format() {
        let r = CompressionReport {
            k: 36,
            rel_frobenius_error: 0.0312345678,
            energy_retained: 0.999,
        };
        assert_eq!(r.to_string(), "36\t0.031235\t0.999000");
    }
}
