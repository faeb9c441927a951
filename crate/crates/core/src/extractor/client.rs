//! Chat-completion client for any OpenAI-compatible endpoint.

use std::time::Duration;

use serde_json::{json, Value};

use super::{ExtractionRequest, ExtractorError, ServiceError};

/// Environment variable holding the API credential.
pub const API_KEY_ENV: &str = "TERMDRIFT_API_KEY";

pub trait ChatBackend: Sync {
    fn complete(&self, request: &ExtractionRequest) -> Result<String, ServiceError>;
}

#[derive(Debug, Clone)]
pub struct ChatClient {
    endpoint: String,
    model: String,
    api_key: String,
    agent: ureq::Agent,
}

impl ChatClient {
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key: impl Into<String>,
        timeout: Duration,
    ) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: api_key.into(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }

    /// Reads the credential from [`API_KEY_ENV`].
    pub fn from_env(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        timeout: Duration,
    ) -> Result<Self, ExtractorError> {
        let key = std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or(ExtractorError::MissingCredential(API_KEY_ENV))?;
        Ok(Self::new(endpoint, model, key, timeout))
    }

    pub fn request_body(&self, request: &ExtractionRequest) -> Value {
        json!({
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": request.system},
                {"role": "user", "content": request.user},
            ],
        })
    }
}

impl ChatBackend for ChatClient {
    fn complete(&self, request: &ExtractionRequest) -> Result<String, ServiceError> {
        let resp = self
            .agent
            .post(&self.endpoint)
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(self.request_body(request));
        let resp = match resp {
            Ok(r) => r,
            Err(ureq::Error::Status(status, r)) => {
                let body = r.into_string().unwrap_or_default();
                return Err(ServiceError {
                    message: format!("HTTP {status}: {}", body.trim()),
                    retryable: status == 429 || status >= 500,
                });
            }
            Err(ureq::Error::Transport(t)) => {
                return Err(ServiceError {
                    message: t.to_string(),
                    retryable: true,
                })
            }
        };
        let body: Value = resp.into_json().map_err(|e| ServiceError {
            message: format!("malformed response: {e}"),
            retryable: false,
        })?;
        body.pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| ServiceError {
                message: "response has no choices[0].message.content".into(),
                retryable: false,
            })
    }
}
