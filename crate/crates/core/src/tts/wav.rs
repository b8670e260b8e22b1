//! 16-bit PCM RIFF/WAVE encoding and a tolerant reader for backend responses.

use std::fs;
use std::io;
use std::path::Path;

use super::AudioResult;

pub const HEADER_LEN: usize = 44;

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

/// Canonical 44-byte header followed by little-endian mono samples.
pub fn encode_wav(sample_rate: u32, samples: &[i16]) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(HEADER_LEN + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // channels
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

pub fn write_wav(audio: &AudioResult, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, encode_wav(audio.sample_rate, &audio.pcm))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WavData {
    pub sample_rate: u32,
    /// Channel count as stored in the file.
    pub channels: u16,
    /// Mono samples; multi-channel input is averaged.
    pub samples: Vec<i16>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WavError {
    #[error("not a RIFF/WAVE file")]
    NotWave,
    #[error("truncated WAV data")]
    Truncated,
    #[error("missing `{0}` chunk")]
    MissingChunk(&'static str),
    #[error("unsupported WAV encoding: format {format}, {bits} bits")]
    Unsupported { format: u16, bits: u16 },
}

fn u16_at(b: &[u8], at: usize) -> Result<u16, WavError> {
    b.get(at..at + 2)
        .map(|s| u16::from_le_bytes([s[0], s[1]]))
        .ok_or(WavError::Truncated)
}

fn u32_at(b: &[u8], at: usize) -> Result<u32, WavError> {
    b.get(at..at + 4)
        .map(|s| u32::from_le_bytes([s[0], s[1], s[2], s[3]]))
        .ok_or(WavError::Truncated)
}

/// Reads 16-bit PCM WAV, skipping unknown chunks.
pub fn parse_wav(bytes: &[u8]) -> Result<WavData, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotWave);
    }
    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    let mut at = 12;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let len = u32_at(bytes, at + 4)? as usize;
        let body_start = at + 8;
        // Streaming writers leave the data length unset; take what is there.
        let body_end = body_start.saturating_add(len).min(bytes.len());
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                let mut format = u16_at(body, 0)?;
                let channels = u16_at(body, 2)?;
                let rate = u32_at(body, 4)?;
                let bits = u16_at(body, 14)?;
                if format == FORMAT_EXTENSIBLE {
                    format = u16_at(body, 24)?;
                }
                fmt = Some((format, channels, rate, bits));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        at = body_start.saturating_add(len).saturating_add(len & 1);
    }

    let (format, channels, sample_rate, bits) = fmt.ok_or(WavError::MissingChunk("fmt "))?;
    if format != FORMAT_PCM || bits != 16 || channels == 0 {
        return Err(WavError::Unsupported { format, bits });
    }
    let data = data.ok_or(WavError::MissingChunk("data"))?;
    let frame = channels as usize * 2;
    let samples = data
        .chunks_exact(frame)
        .map(|f| {
            let sum: i32 = f.chunks_exact(2).map(|s| i16::from_le_bytes([s[0], s[1]]) as i32).sum();
            (sum / channels as i32) as i16
        })
        .collect();
    Ok(WavData {
        sample_rate,
        channels,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn audio(rate: u32, pcm: Vec<i16>) -> AudioResult {
        AudioResult {
            request_id: "t".into(),
            sample_rate: rate,
            channels: 1,
            pcm,
        }
    }

    #[test]
    fn one_second_file_size() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.wav");
        write_wav(&audio(22050, vec![0; 22050]), &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 44 + 44100);
        assert_eq!(bytes.len(), 44144);
    }

    #[test]
    fn empty_payload_header_bytes() {
        let bytes = encode_wav(22050, &[]);
        let expected: Vec<u8> = [
            &b"RIFF"[..],
            &36u32.to_le_bytes(),
            b"WAVE",
            b"fmt ",
            &16u32.to_le_bytes(),
            &1u16.to_le_bytes(),
            &1u16.to_le_bytes(),
            &22050u32.to_le_bytes(),
            &44100u32.to_le_bytes(),
            &2u16.to_le_bytes(),
            &16u16.to_le_bytes(),
            b"data",
            &0u32.to_le_bytes(),
        ]
        .concat();
        assert_eq!(bytes, expected);
        let parsed = parse_wav(&bytes).unwrap();
        assert_eq!(parsed.samples, Vec::<i16>::new());
    }

    #[test]
    fn reads_extra_chunks_and_stereo() {
        let mut bytes = b"RIFF\0\0\0\0WAVE".to_vec();
        bytes.extend_from_slice(b"LIST");
        bytes.extend_from_slice(&3u32.to_le_bytes());
        bytes.extend_from_slice(b"abc\0"); // odd length plus pad byte
        bytes.extend_from_slice(b"fmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        for v in [1u16, 2] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        bytes.extend_from_slice(&16000u32.to_le_bytes());
        bytes.extend_from_slice(&64000u32.to_le_bytes());
        bytes.extend_from_slice(&4u16.to_le_bytes());
        bytes.extend_from_slice(&16u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&8u32.to_le_bytes());
        for s in [100i16, 200, -4, -6] {
            bytes.extend_from_slice(&s.to_le_bytes());
        }
        let wav = parse_wav(&bytes).unwrap();
        assert_eq!(wav.sample_rate, 16000);
        assert_eq!(wav.channels, 2);
        assert_eq!(wav.samples, vec![150, -5]);
    }

    #[test]
    fn rejects_non_wave_and_float() {
        assert_eq!(parse_wav(b"hello world!"), Err(WavError::NotWave));
        let mut bytes = encode_wav(8000, &[1, 2]);
        bytes[20] = 3; // IEEE float
        assert!(matches!(
            parse_wav(&bytes),
            Err(WavError::Unsupported { format: 3, .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(rate in 1u32..200_000, pcm in proptest::collection::vec(any::<i16>(), 0..500)) {
            let wav = parse_wav(&encode_wav(rate, &pcm)).unwrap();
            prop_assert_eq!(wav.sample_rate, rate);
            prop_assert_eq!(wav.samples, pcm);
        }
    }
}
