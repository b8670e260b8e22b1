use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::wav::encode_wav;
use super::{AudioResult, SynthesisRequest};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("backend error {status}: {message}")]
    Backend { status: u16, message: String },
    #[error("backend timed out")]
    Timeout,
    #[error("backend returned invalid audio: {0}")]
    InvalidAudio(String),
}

/// Reply to `GET /health`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    #[serde(default)]
    pub sample_rate: Option<u32>,
    #[serde(default)]
    pub feature_dim: Option<u32>,
}

/// Something that turns one request into audio.
pub trait Backend: Sync {
    fn synthesize(&self, request: &SynthesisRequest) -> Result<AudioResult, BackendError>;

    fn health(&self) -> Result<Health, BackendError>;
}

/// In-process backend producing silence: 0.1 s per input character at
/// 22050 Hz, with the first 8 samples carrying the bytes of
/// [`MockBackend::text_hash`] of the request text.
#[derive(Clone, Copy, Debug, Default)]
pub struct MockBackend;

impl MockBackend {
    pub const SAMPLE_RATE: u32 = 22050;
    pub const SAMPLES_PER_CHAR: usize = 2205;
    pub const HASH_SAMPLES: usize = 8;

    /// 64-bit FNV-1a over the UTF-8 bytes.
    pub fn text_hash(text: &str) -> u64 {
        text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
            (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
        })
    }

    pub fn render(text: &str) -> Vec<i16> {
        let len = (text.chars().count() * Self::SAMPLES_PER_CHAR).max(Self::HASH_SAMPLES);
        let mut pcm = vec![0i16; len];
        for (s, b) in pcm.iter_mut().zip(Self::text_hash(text).to_le_bytes()) {
            *s = b as i16;
        }
        pcm
    }

    /// Whether `pcm` starts with the hash of `text`.
    pub fn verify(text: &str, pcm: &[i16]) -> bool {
        pcm.len() >= Self::HASH_SAMPLES
            && pcm
                .iter()
                .zip(Self::text_hash(text).to_le_bytes())
                .all(|(s, b)| *s == b as i16)
    }

    /// The WAV file a mock HTTP backend would answer with.
    pub fn render_wav(text: &str) -> Vec<u8> {
        encode_wav(Self::SAMPLE_RATE, &Self::render(text))
    }
}

impl Backend for MockBackend {
    fn synthesize(&self, request: &SynthesisRequest) -> Result<AudioResult, BackendError> {
        Ok(AudioResult {
            request_id: request.request_id.clone(),
            sample_rate: Self::SAMPLE_RATE,
            channels: 1,
            pcm: Self::render(&request.text),
        })
    }

    fn health(&self) -> Result<Health, BackendError> {
        Ok(Health {
            status: "ok".into(),
            sample_rate: Some(Self::SAMPLE_RATE),
            feature_dim: None,
        })
    }
}
