//! End-to-end exercises of the HTTP surface through the client crate.

use std::time::{Duration, Instant};

use qldpc_api::*;
use qldpc_client::{ApiClient, ClientError};

async fn start() -> ApiClient {
    let (addr, _handle) = qldpc_service::spawn_server("127.0.0.1:0".parse().unwrap())
        .await
        .expect("bind ephemeral port");
    ApiClient::new(format!("http://{addr}"))
}

fn preset(name: &str) -> CodeSource {
    CodeSource::Preset { name: name.into() }
}

fn expect_api_error<T: std::fmt::Debug>(result: Result<T, ClientError>, status: u16) -> String {
    match result {
        Err(ClientError::Api { status: got, message }) => {
            assert_eq!(got, status, "unexpected status: {message}");
            message
        }
        other => panic!("expected an api error, got {other:?}"),
    }
}

async fn wait_terminal(client: &ApiClient, job_id: u64) -> JobStatus {
    let deadline = Instant::now() + Duration::from_secs(120);
    loop {
        let status = client.job_status(job_id).await.expect("job status");
        if status.state.is_terminal() {
            return status;
        }
        assert!(Instant::now() < deadline, "job {job_id} did not settle");
        tokio::time::sleep(Duration::from_millis(20)).await;
    }
}

#[tokio::test]
async fn health_reports_ok() {
    let client = start().await;
    let health = client.health().await.unwrap();
    assert_eq!(health.status, "ok");
    assert!(!health.version.is_empty());
}

#[tokio::test]
async fn construct_preset_round_trips_through_validate() {
    let client = start().await;
    let built = client
        .construct(&ConstructRequest {
            preset: Some("e1".into()),
            ..Default::default()
        })
        .await
        .unwrap();
    assert_eq!((built.n, built.k), (7, 1));
    assert_eq!(built.family, "eg");
    assert_eq!(built.basename, "e1");
    assert_eq!(built.claimed_d, Some(3));

    let verdict = client
        .validate(&ValidateRequest {
            source: CodeSource::Descriptor {
                descriptor_toml: built.descriptor_toml,
                hx_alist: built.hx_alist,
                hz_alist: built.hz_alist,
            },
        })
        .await
        .unwrap();
    assert!(verdict.ok, "checks: {:?}", verdict.checks);
    assert!(verdict.checks.iter().any(|c| c.name == "orthogonality"));
    assert_eq!(verdict.family.as_deref(), Some("eg"));
    assert_eq!(verdict.n, Some(7));
}

#[tokio::test]
async fn construct_by_explicit_parameters() {
    let client = start().await;
    let qc = client
        .construct(&ConstructRequest {
            family: Some("qc".into()),
            p: Some(7),
            sigma: Some(3),
            ..Default::default()
        })
        .await
        .unwrap();
    assert_eq!((qc.n, qc.k), (50, 12));
    // Parameters matching a preset row adopt its name and distance.
    assert_eq!(qc.basename, "q1");
    assert_eq!(qc.claimed_d, Some(6));

    let eg = client
        .construct(&ConstructRequest {
            family: Some("eg".into()),
            s: Some(3),
            basename: Some("mycode".into()),
            ..Default::default()
        })
        .await
        .unwrap();
    assert_eq!((eg.n, eg.k), (73, 19));
    assert_eq!(eg.basename, "mycode");
}

#[tokio::test]
async fn construct_rejects_invalid_parameters() {
    let client = start().await;
    let bad_p = client
        .construct(&ConstructRequest {
            family: Some("qc".into()),
            p: Some(8),
            sigma: Some(3),
            ..Default::default()
        })
        .await;
    expect_api_error(bad_p, 400);

    let unknown = client
        .construct(&ConstructRequest {
            preset: Some("q9".into()),
            ..Default::default()
        })
        .await;
    expect_api_error(unknown, 400);

    let both = client
        .construct(&ConstructRequest {
            preset: Some("q1".into()),
            family: Some("qc".into()),
            ..Default::default()
        })
        .await;
    let message = expect_api_error(both, 400);
    assert!(message.contains("not both"), "{message}");

    let missing = client.construct(&ConstructRequest::default()).await;
    expect_api_error(missing, 400);
}

#[tokio::test]
async fn validate_surfaces_matrix_tampering() {
    let client = start().await;
    let built = client
        .construct(&ConstructRequest {
            preset: Some("e1".into()),
            ..Default::default()
        })
        .await
        .unwrap();
    // Flip one bit of H_X; the orthogonality relation must break.
    let mut hx = qldpc::alist::from_alist(&built.hx_alist).unwrap();
    let flipped = hx.get(0, 0);
    hx.set(0, 0, !flipped);
    let verdict = client
        .validate(&ValidateRequest {
            source: CodeSource::Descriptor {
                descriptor_toml: built.descriptor_toml,
                hx_alist: qldpc::alist::to_alist(&hx),
                hz_alist: built.hz_alist,
            },
        })
        .await
        .unwrap();
    assert!(!verdict.ok);
    assert_eq!(verdict.checks.len(), 1);
    assert_eq!(verdict.checks[0].name, "load");
    assert!(
        verdict.checks[0].detail.contains("twisted condition"),
        "{}",
        verdict.checks[0].detail
    );

    let unknown = client
        .validate(&ValidateRequest {
            source: preset("nosuch"),
        })
        .await;
    expect_api_error(unknown, 400);

    // Unparseable files are a request error, not a verdict.
    let corrupt = client
        .validate(&ValidateRequest {
            source: CodeSource::Descriptor {
                descriptor_toml: "not = [valid".into(),
                hx_alist: String::new(),
                hz_alist: String::new(),
            },
        })
        .await;
    expect_api_error(corrupt, 400);
}

#[tokio::test]
async fn distance_search_reaches_published_value() {
    let client = start().await;
    let found = client
        .distance(&DistanceRequest {
            source: preset("e1"),
            w_max: 4,
        })
        .await
        .unwrap();
    assert_eq!(found.found, Some(3));
    assert_eq!(found.claimed_d, Some(3));

    let zero = client
        .distance(&DistanceRequest {
            source: preset("e1"),
            w_max: 0,
        })
        .await;
    expect_api_error(zero, 400);
}

#[tokio::test]
async fn simulation_job_lifecycle() {
    let client = start().await;
    let created = client
        .submit_simulation(&SimulationRequest {
            source: preset("e1"),
            label: Some("tiny".into()),
            epsilons: vec![0.1],
            decoder: "camel".into(),
            success_mode: "degenerate".into(),
            min_frame_errors: 5,
            max_trials: 20_000,
            iterations: 15,
            master_seed: 11,
        })
        .await
        .unwrap();

    let status = wait_terminal(&client, created.job_id).await;
    assert_eq!(status.state, JobState::Done, "error: {:?}", status.error);
    assert_eq!(status.points.len(), 1);
    assert_eq!(status.progress.points_done, 1);
    assert_eq!(status.progress.total_points, 1);
    assert!(status.points[0].frame_errors >= 5);

    let csv = client.job_csv(created.job_id).await.unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("code,decoder,success_mode,epsilon,trials,frame_errors,fer,ci95_low,ci95_high,iterations,master_seed")
    );
    let row = lines.next().expect("one data row");
    assert!(row.starts_with("tiny,camel,degenerate,0.1,"), "{row}");
    assert_eq!(lines.next(), None);
}

#[tokio::test]
async fn simulation_rejects_bad_specs() {
    let client = start().await;
    let base = SimulationRequest {
        source: preset("e1"),
        label: None,
        epsilons: vec![0.05],
        decoder: "camel".into(),
        success_mode: "degenerate".into(),
        min_frame_errors: 5,
        max_trials: 100,
        iterations: 15,
        master_seed: 1,
    };

    let unknown_decoder = SimulationRequest {
        decoder: "magic".into(),
        ..base.clone()
    };
    expect_api_error(client.submit_simulation(&unknown_decoder).await, 400);

    let zero_budget = SimulationRequest {
        min_frame_errors: 0,
        ..base.clone()
    };
    expect_api_error(client.submit_simulation(&zero_budget).await, 400);

    let bad_eps = SimulationRequest {
        epsilons: vec![0.9],
        ..base.clone()
    };
    expect_api_error(client.submit_simulation(&bad_eps).await, 400);

    let unknown_code = SimulationRequest {
        source: preset("q99"),
        ..base
    };
    expect_api_error(client.submit_simulation(&unknown_code).await, 400);

    expect_api_error(client.job_status(999).await, 404);
}

#[tokio::test]
async fn cancel_stops_a_running_job() {
    let client = start().await;
    let created = client
        .submit_simulation(&SimulationRequest {
            source: preset("q1"),
            label: None,
            epsilons: vec![0.1],
            decoder: "camel".into(),
            success_mode: "degenerate".into(),
            // A budget no run will meet, so only cancellation ends it.
            min_frame_errors: u64::MAX,
            max_trials: u64::MAX,
            iterations: 15,
            master_seed: 3,
        })
        .await
        .unwrap();

    let after_cancel = client.cancel_job(created.job_id).await.unwrap();
    assert!(
        !after_cancel.state.is_terminal() || after_cancel.state == JobState::Cancelled,
        "unexpected state {:?}",
        after_cancel.state
    );
    let settled = wait_terminal(&client, created.job_id).await;
    assert_eq!(settled.state, JobState::Cancelled);

    let csv = client.job_csv(created.job_id).await;
    expect_api_error(csv, 404);
}
