use std::sync::Arc;

use mosaic_core::link::{LinkConfig, Linked};
use mosaic_core::score::{ScoreParams, SensitivityTable};
use mosaic_core::service::SearchIndex;
use mosaic_core::synth::{synthesize, SynthConfig};
use mosaic_core::ExecMode;
use mosaic_net::serve_api;
use serde_json::Value;

fn get(url: &str) -> (u16, String) {
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let mut r = agent.get(url).call().unwrap();
    (r.status().as_u16(), r.body_mut().read_to_string().unwrap())
}

fn index() -> Arc<SearchIndex> {
    let (corpus, _) = synthesize(&SynthConfig::new(5, 600)).unwrap();
    let store = corpus.to_store();
    let linked = Linked::build(&store, &LinkConfig::default());
    Arc::new(
        SearchIndex::build(&store, linked, &SensitivityTable::default(), &ScoreParams::default(), ExecMode::Parallel)
            .unwrap(),
    )
}

#[test]
fn api_endpoints_round_trip() {
    let idx = index();
    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<html>ui</html>").unwrap();
    let server = serve_api(idx.clone(), Some(ui.path().to_path_buf()), "127.0.0.1:0".parse().unwrap()).unwrap();
    let base = server.url();

    let (status, body) = get(&format!("{base}/api/search?name=a"));
    assert_eq!(status, 200);
    let v: Value = serde_json::from_str(&body).unwrap();
    let direct = serde_json::to_value(idx.search("a", None, 1).unwrap()).unwrap();
    assert_eq!(v, direct);

    let id = v["groups"]["voter"]["items"][0]["dossier_id"].as_str().unwrap().to_string();
    let (status, body) = get(&format!("{base}/api/dossier/{id}"));
    assert_eq!(status, 200);
    let d: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(d["dossier"]["dossier_id"], id.as_str());
    assert!(d["score"]["value"].as_f64().unwrap() >= 16.0);

    assert_eq!(get(&format!("{base}/api/dossier/voter-missing")).0, 404);
    assert_eq!(get(&format!("{base}/api/search?name=")).0, 400);
    assert_eq!(get(&format!("{base}/api/unknown")).0, 404);

    let (status, body) = get(&format!("{base}/api/stats"));
    assert_eq!(status, 200);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap(), serde_json::to_value(idx.stats()).unwrap());

    let (status, body) = get(&format!("{base}/"));
    assert_eq!((status, body.as_str()), (200, "<html>ui</html>"));
    let (status, body) = get(&format!("{base}/dossier/abc"));
    assert_eq!((status, body.as_str()), (200, "<html>ui</html>"));
}

#[test]
fn location_and_paging_parameters_pass_through() {
    let idx = index();
    let server = serve_api(idx.clone(), None, "127.0.0.1:0".parse().unwrap()).unwrap();
    let (status, body) = get(&format!("{}/api/search?name=s&location=new%20delhi&page=2", server.url()));
    assert_eq!(status, 200);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["page"], 2);
    assert_eq!(v, serde_json::to_value(idx.search("s", Some("new delhi"), 2).unwrap()).unwrap());
}
