//! Speech synthesis frontend: sentence splitting, backend dispatch and WAV output.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::Serialize;

pub mod backend;
#[cfg(feature = "http")]
pub mod http;
pub mod sentence;
pub mod wav;

pub use backend::{Backend, BackendError, Health, MockBackend, DEFAULT_TIMEOUT};
#[cfg(feature = "http")]
pub use http::HttpBackend;
pub use sentence::{split_sentences, SentenceSplitter, SplitError, SynthesisRequest, DEFAULT_MAX_CHARS};
pub use wav::{encode_wav, parse_wav, write_wav, WavData, WavError};

pub const DEFAULT_PARALLELISM: usize = 2;

/// Mono 16-bit audio for one request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AudioResult {
    pub request_id: String,
    pub sample_rate: u32,
    pub channels: u16,
    pub pcm: Vec<i16>,
}

impl AudioResult {
    pub fn duration_secs(&self) -> f64 {
        self.pcm.len() as f64 / self.sample_rate as f64
    }
}

/// Sends every request to `backend`, at most `parallelism` at a time, and
/// returns the audio in request order. Stops at the first failure and
/// reports the failure of the earliest failed request.
pub fn synthesize(
    requests: &[SynthesisRequest],
    backend: &dyn Backend,
    parallelism: usize,
) -> Result<Vec<AudioResult>, BackendError> {
    let workers = parallelism.max(1).min(requests.len());
    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let slots: Mutex<Vec<Option<Result<AudioResult, BackendError>>>> = Mutex::new(vec![None; requests.len()]);

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                while !failed.load(Ordering::Relaxed) {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(request) = requests.get(i) else { break };
                    let result = backend.synthesize(request);
                    if result.is_err() {
                        failed.store(true, Ordering::Relaxed);
                    }
                    slots.lock().expect("no worker panics while holding the lock")[i] = Some(result);
                }
            });
        }
    });

    // Requests are claimed in index order, so every unclaimed slot comes
    // after the failure that stopped the workers.
    let mut out = Vec::with_capacity(requests.len());
    for slot in slots.into_inner().expect("workers finished") {
        match slot {
            Some(Ok(audio)) => out.push(audio),
            Some(Err(e)) => return Err(e),
            None => unreachable!("unclaimed request before any failure"),
        }
    }
    Ok(out)
}
