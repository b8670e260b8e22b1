use std::io::ErrorKind;
use std::time::Duration;

use serde::Serialize;

use super::backend::{Backend, BackendError, Health};
use super::wav::parse_wav;
use super::{AudioResult, SynthesisRequest};

const MAX_RESPONSE_BYTES: u64 = 512 * 1024 * 1024;

#[derive(Serialize)]
struct SynthesizeBody<'a> {
    text: &'a str,
    id: &'a str,
}

/// Client for the HTTP protocol: `POST /synthesize` with
/// `{"text": ..., "id": ...}` answered by WAV bytes, and `GET /health`.
#[derive(Clone, Debug)]
pub struct HttpBackend {
    base_url: String,
    agent: ureq::Agent,
}

fn classify(err: ureq::Error) -> BackendError {
    match err {
        ureq::Error::Timeout(_) => BackendError::Timeout,
        ureq::Error::Io(e) if matches!(e.kind(), ErrorKind::TimedOut | ErrorKind::WouldBlock) => BackendError::Timeout,
        other => BackendError::Unavailable(other.to_string()),
    }
}

fn is_connection_failure(err: &ureq::Error) -> bool {
    match err {
        ureq::Error::ConnectionFailed | ureq::Error::HostNotFound => true,
        ureq::Error::Io(e) => matches!(
            e.kind(),
            ErrorKind::ConnectionRefused
                | ErrorKind::ConnectionReset
                | ErrorKind::ConnectionAborted
                | ErrorKind::BrokenPipe
        ),
        _ => false,
    }
}

impl HttpBackend {
    pub fn new(base_url: impl Into<String>, timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        HttpBackend {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            agent,
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    /// Runs `call` once more if the first attempt could not connect.
    fn with_retry<T>(&self, call: impl Fn() -> Result<T, ureq::Error>) -> Result<T, BackendError> {
        match call() {
            Err(e) if is_connection_failure(&e) => call().map_err(classify),
            other => other.map_err(classify),
        }
    }

    fn error_status(mut resp: ureq::http::Response<ureq::Body>) -> BackendError {
        let status = resp.status().as_u16();
        let message = resp.body_mut().read_to_string().unwrap_or_default();
        BackendError::Backend {
            status,
            message: message.trim().to_string(),
        }
    }
}

impl Backend for HttpBackend {
    fn synthesize(&self, request: &SynthesisRequest) -> Result<AudioResult, BackendError> {
        let url = format!("{}/synthesize", self.base_url);
        let body = SynthesizeBody {
            text: &request.text,
            id: &request.request_id,
        };
        let mut resp = self.with_retry(|| self.agent.post(&url).send_json(&body))?;
        if !resp.status().is_success() {
            return Err(Self::error_status(resp));
        }
        let bytes = resp
            .body_mut()
            .with_config()
            .limit(MAX_RESPONSE_BYTES)
            .read_to_vec()
            .map_err(classify)?;
        let wav = parse_wav(&bytes).map_err(|e| BackendError::InvalidAudio(e.to_string()))?;
        Ok(AudioResult {
            request_id: request.request_id.clone(),
            sample_rate: wav.sample_rate,
            channels: 1,
            pcm: wav.samples,
        })
    }

    fn health(&self) -> Result<Health, BackendError> {
        let url = format!("{}/health", self.base_url);
        let mut resp = self.with_retry(|| self.agent.get(&url).call())?;
        if !resp.status().is_success() {
            return Err(Self::error_status(resp));
        }
        resp.body_mut()
            .read_json::<Health>()
            .map_err(|e| BackendError::Backend {
                status: 200,
                message: format!("bad health reply: {e}"),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreachable_http_backend() {
        // Bind then drop to get a port nobody listens on.
        let port = std::net::TcpListener::bind("127.0.0.1:0")
            .unwrap()
            .local_addr()
            .unwrap()
            .port();
        let backend = HttpBackend::new(format!("http://127.0.0.1:{port}"), Duration::from_secs(2));
        let err = backend.synthesize(&SynthesisRequest::new("а.")).unwrap_err();
        assert!(matches!(err, BackendError::Unavailable(_)), "{err:?}");
    }
}
