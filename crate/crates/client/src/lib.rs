//! Thin async client for the qldpc service.
//!
//! Every method mirrors one endpoint; non-2xx responses are surfaced as
//! [`ClientError::Api`] with the server's error message.

use qldpc_api::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("http error: {0}")]
    Http(#[from] reqwest::Error),
    #[error("server rejected request ({status}): {message}")]
    Api { status: u16, message: String },
}

pub type Result<T> = std::result::Result<T, ClientError>;

pub struct ApiClient {
    base: String,
    http: reqwest::Client,
}

impl ApiClient {
    /// `base` is the server root, e.g. `http://127.0.0.1:8351`.
    pub fn new(base: impl Into<String>) -> Self {
        let mut base = base.into();
        while base.ends_with('/') {
            base.pop();
        }
        ApiClient {
            base,
            http: reqwest::Client::new(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(response: reqwest::Response) -> Result<T> {
        let status = response.status();
        if status.is_success() {
            return Ok(response.json::<T>().await?);
        }
        let message = match response.json::<ErrorBody>().await {
            Ok(body) => body.error,
            Err(_) => status
                .canonical_reason()
                .unwrap_or("unknown error")
                .to_string(),
        };
        Err(ClientError::Api {
            status: status.as_u16(),
            message,
        })
    }

    async fn post_json<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        let response = self
            .http
            .post(format!("{}{path}", self.base))
            .json(body)
            .send()
            .await?;
        Self::decode(response).await
    }

    async fn get_json<T: DeserializeOwned>(&self, path: &str) -> Result<T> {
        let response = self.http.get(format!("{}{path}", self.base)).send().await?;
        Self::decode(response).await
    }

    pub async fn health(&self) -> Result<HealthResponse> {
        self.get_json("/api/v1/health").await
    }

    pub async fn construct(&self, request: &ConstructRequest) -> Result<ConstructResponse> {
        self.post_json("/api/v1/codes/construct", request).await
    }

    pub async fn validate(&self, request: &ValidateRequest) -> Result<ValidateResponse> {
        self.post_json("/api/v1/codes/validate", request).await
    }

    pub async fn distance(&self, request: &DistanceRequest) -> Result<DistanceResponse> {
        self.post_json("/api/v1/codes/distance", request).await
    }

    pub async fn submit_simulation(&self, request: &SimulationRequest) -> Result<JobCreated> {
        self.post_json("/api/v1/simulations", request).await
    }

    pub async fn job_status(&self, job_id: u64) -> Result<JobStatus> {
        self.get_json(&format!("/api/v1/simulations/{job_id}")).await
    }

    /// The finished sweep as CSV text; 404 until the job is done.
    pub async fn job_csv(&self, job_id: u64) -> Result<String> {
        let response = self
            .http
            .get(format!("{}/api/v1/simulations/{job_id}/csv", self.base))
            .send()
            .await?;
        let status = response.status();
        if status.is_success() {
            return Ok(response.text().await?);
        }
        let message = match response.json::<ErrorBody>().await {
            Ok(body) => body.error,
            Err(_) => status
                .canonical_reason()
                .unwrap_or("unknown error")
                .to_string(),
        };
        Err(ClientError::Api {
            status: status.as_u16(),
            message,
        })
    }

    pub async fn cancel_job(&self, job_id: u64) -> Result<JobStatus> {
        self.post_json(&format!("/api/v1/simulations/{job_id}/cancel"), &())
            .await
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_slashes_are_trimmed() {
        let client = ApiClient::new("http://localhost:9/");
        assert_eq!(client.base(), "http://localhost:9");
        let client = ApiClient::new("http://localhost:9");
        assert_eq!(client.base(), "http://localhost:9");
    }
}
