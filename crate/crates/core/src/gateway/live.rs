//! Live HTTP chat-completion transport (OpenAI-style endpoint).

use std::time::Duration;

use serde_json::json;

use super::{Backend, ChatRequest, GatewayError, Role};

const MAX_RETRIES: u32 = 2;
const BACKOFF_BASE_MS: u64 = 200;

#[derive(Debug, Clone)]
pub struct LiveConfig {
    /// Full completions URL, e.g. `http://localhost:8000/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key; empty to skip
    /// the Authorization header.
    pub api_key_env: String,
    pub timeout_secs: u64,
}

pub struct LiveBackend {
    config: LiveConfig,
    client: reqwest::blocking::Client,
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> Result<Self, GatewayError> {
        if config.endpoint.is_empty() {
            return Err(GatewayError::NotConfigured("live backend needs an endpoint URL".into()));
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs.max(1)))
            .build()
            .map_err(|e| GatewayError::Transport(e.to_string()))?;
        Ok(LiveBackend { config, client })
    }

    fn request_body(&self, request: &ChatRequest) -> serde_json::Value {
        json!({
            "model": self.config.model,
            "messages": request.messages.iter().map(|m| json!({
                "role": match m.role {
                    Role::System => "system",
                    Role::User => "user",
                    Role::Assistant => "assistant",
                },
                "content": m.content,
            })).collect::<Vec<_>>(),
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        })
    }

    fn post_once(&self, request: &ChatRequest) -> Result<String, GatewayError> {
        let mut builder = self.client.post(&self.config.endpoint).json(&self.request_body(request));
        if !self.config.api_key_env.is_empty() {
            if let Ok(key) = std::env::var(&self.config.api_key_env) {
                builder = builder.bearer_auth(key);
            }
        }
        let response = builder.send().map_err(|e| GatewayError::Transport(e.to_string()))?;
        if !response.status().is_success() {
            return Err(GatewayError::Transport(format!("endpoint returned {}", response.status())));
        }
        let body: serde_json::Value =
            response.json().map_err(|e| GatewayError::Transport(e.to_string()))?;
        body["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| GatewayError::Transport("response missing choices[0].message.content".into()))
    }
}

impl Backend for LiveBackend {
    fn complete(&self, request: &ChatRequest) -> Result<String, GatewayError> {
        let mut last_err = None;
        for attempt in 0..=MAX_RETRIES {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(BACKOFF_BASE_MS << (attempt * 2 - 2)));
            }
            match self.post_once(request) {
                Ok(text) => return Ok(text),
                Err(err) => last_err = Some(err),
            }
        }
        Err(last_err.unwrap_or_else(|| GatewayError::Transport("no attempt made".into())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{CallTag, Stage};
    use std::io::{Read, Write};
    use std::net::TcpListener;

    /// One-shot local stub that captures the request body and answers a
    /// canned completion.
    fn spawn_stub() -> (String, std::sync::mpsc::Receiver<String>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let (tx, rx) = std::sync::mpsc::channel();
        std::thread::spawn(move || {
            let (mut stream, _) = listener.accept().unwrap();
            let mut buf = vec![0u8; 65536];
            let mut total = Vec::new();
            loop {
                let n = stream.read(&mut buf).unwrap();
                total.extend_from_slice(&buf[..n]);
                let text = String::from_utf8_lossy(&total);
                if let Some(body_at) = text.find("\r\n\r\n") {
                    let headers = &text[..body_at];
                    let content_length = headers
                        .lines()
                        .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length:").map(|v| v.trim().parse::<usize>().unwrap()))
                        .unwrap_or(0);
                    if total.len() >= body_at + 4 + content_length {
                        tx.send(text[body_at + 4..].to_string()).unwrap();
                        break;
                    }
                }
            }
            let body = r#"{"choices":[{"message":{"content":"stub reply"}}]}"#;
            let response = format!(
                "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\n\r\n{}",
                body.len(),
                body
            );
            stream.write_all(response.as_bytes()).unwrap();
        });
        (format!("http://{addr}/v1/chat/completions"), rx)
    }

    #[test]
    fn live_request_body_carries_configured_parameters() {
        let (endpoint, rx) = spawn_stub();
        let backend = LiveBackend::new(LiveConfig {
            endpoint,
            model: "test-model".to_string(),
            api_key_env: String::new(),
            timeout_secs: 5,
        })
        .unwrap();
        let req = ChatRequest::new("sys", "user text", CallTag::new(Stage::Preliminary, 1));
        let reply = backend.complete(&req).unwrap();
        assert_eq!(reply, "stub reply");

        let body = rx.recv().unwrap();
        let value: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(value["temperature"], serde_json::json!(0.1));
        assert_eq!(value["max_tokens"], serde_json::json!(4096));
        assert_eq!(value["model"], "test-model");
        assert_eq!(value["messages"][0]["role"], "system");
    }
}
