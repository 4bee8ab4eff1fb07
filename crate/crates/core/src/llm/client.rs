//! Chat-completion clients: a real HTTP client for OpenAI-compatible
//! endpoints and a deterministic replay client for tests and offline runs.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("endpoint returned status {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed completion response: {0}")]
    BadResponse(String),
    #[error("replay transcript exhausted after {0} replies")]
    ReplayExhausted(usize),
    #[error("replay directory: {0}")]
    Replay(String),
}

/// A chat-completion backend. Implementations must be safe to share across
/// concurrent pipeline runs.
pub trait LlmClient: Send + Sync {
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, LlmError>;
}

/// Environment variable holding the bearer token for HTTP endpoints.
pub const API_KEY_ENV: &str = "LLM_API_KEY";

#[derive(Debug, Clone)]
pub struct HttpClientConfig {
    /// Full chat-completions URL, e.g. `https://api.openai.com/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub timeout: Duration,
    /// Retries after the first attempt, with exponential backoff.
    pub max_retries: u32,
    pub retry_base_delay: Duration,
    /// Overrides the `LLM_API_KEY` environment variable when set.
    pub api_key: Option<String>,
}

impl HttpClientConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        HttpClientConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            temperature: 0.2,
            timeout: Duration::from_secs(120),
            max_retries: 3,
            retry_base_delay: Duration::from_millis(500),
            api_key: None,
        }
    }
}

pub struct HttpLlmClient {
    config: HttpClientConfig,
    client: reqwest::blocking::Client,
}

impl HttpLlmClient {
    pub fn new(config: HttpClientConfig) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(HttpLlmClient { config, client })
    }

    fn api_key(&self) -> Option<String> {
        self.config
            .api_key
            .clone()
            .or_else(|| std::env::var(API_KEY_ENV).ok())
    }

    fn attempt(&self, body: &serde_json::Value) -> Result<String, LlmError> {
        let mut request = self.client.post(&self.config.endpoint).json(body);
        if let Some(key) = self.api_key() {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(LlmError::Http {
                status: status.as_u16(),
                body: text,
            });
        }
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| LlmError::BadResponse(e.to_string()))?;
        value
            .pointer("/choices/0/message/content")
            .and_then(|c| c.as_str())
            .map(str::to_string)
            .ok_or_else(|| LlmError::BadResponse("no choices[0].message.content".into()))
    }

    fn retryable(error: &LlmError) -> bool {
        match error {
            LlmError::Transport(_) => true,
            LlmError::Http { status, .. } => *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

impl LlmClient for HttpLlmClient {
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, LlmError> {
        let body = serde_json::json!({
            "model": self.config.model,
            "messages": messages,
            "temperature": self.config.temperature,
        });
        let mut delay = self.config.retry_base_delay;
        let mut last = None;
        for attempt in 0..=self.config.max_retries {
            match self.attempt(&body) {
                Ok(content) => return Ok(content),
                Err(e) if Self::retryable(&e) && attempt < self.config.max_retries => {
                    std::thread::sleep(delay);
                    delay *= 2;
                    last = Some(e);
                }
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap_or_else(|| LlmError::Transport("retries exhausted".into())))
    }
}

/// Deterministic client replaying canned replies in order: the nth call
/// returns the nth reply, and running past the end is an error.
pub struct ReplayClient {
    replies: Vec<String>,
    cursor: AtomicUsize,
}

impl ReplayClient {
    pub fn from_replies(replies: Vec<String>) -> Self {
        ReplayClient {
            replies,
            cursor: AtomicUsize::new(0),
        }
    }

    /// Loads `*.txt`-style reply files from a directory. Files are ordered by
    /// the number embedded in their name (`001.txt`, `002.txt`, ...).
    pub fn from_dir(dir: &Path) -> Result<Self, LlmError> {
        let mut entries = Vec::new();
        let listing =
            fs::read_dir(dir).map_err(|e| LlmError::Replay(format!("{}: {e}", dir.display())))?;
        for entry in listing {
            let entry = entry.map_err(|e| LlmError::Replay(e.to_string()))?;
            let path = entry.path();
            if path.is_file() {
                let name = entry.file_name().to_string_lossy().into_owned();
                let number: u64 = name
                    .chars()
                    .take_while(char::is_ascii_digit)
                    .collect::<String>()
                    .parse()
                    .map_err(|_| {
                        LlmError::Replay(format!("reply file '{name}' has no leading number"))
                    })?;
                entries.push((number, name, path));
            }
        }
        if entries.is_empty() {
            return Err(LlmError::Replay(format!(
                "no reply files in {}",
                dir.display()
            )));
        }
        entries.sort();
        let mut replies = Vec::new();
        for (_, _, path) in entries {
            replies.push(
                fs::read_to_string(&path)
                    .map_err(|e| LlmError::Replay(format!("{}: {e}", path.display())))?,
            );
        }
        Ok(ReplayClient::from_replies(replies))
    }

    pub fn remaining(&self) -> usize {
        self.replies
            .len()
            .saturating_sub(self.cursor.load(Ordering::SeqCst))
    }
}

impl LlmClient for ReplayClient {
    fn complete(&self, _messages: &[ChatMessage]) -> Result<String, LlmError> {
        let index = self.cursor.fetch_add(1, Ordering::SeqCst);
        self.replies
            .get(index)
            .cloned()
            .ok_or(LlmError::ReplayExhausted(self.replies.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_returns_replies_in_order_then_errors() {
        let client = ReplayClient::from_replies(vec!["one".into(), "two".into()]);
        assert_eq!(client.complete(&[]).unwrap(), "one");
        assert_eq!(client.complete(&[]).unwrap(), "two");
        assert!(matches!(
            client.complete(&[]),
            Err(LlmError::ReplayExhausted(2))
        ));
    }

    #[test]
    fn messages_serialize_with_lowercase_roles() {
        let msg = ChatMessage::system("hello");
        let json = serde_json::to_value(&msg).unwrap();
        assert_eq!(json["role"], "system");
    }
}
