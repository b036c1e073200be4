use futures_util::{SinkExt, StreamExt};
use qsim_engine::{Server, ServerFrame, SessionConfig};
use tokio::net::TcpStream;
use tokio::time::{timeout, Duration};
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

type Ws = WebSocketStream<MaybeTlsStream<TcpStream>>;

async fn start(seed: u64) -> String {
    let config = SessionConfig { seed: Some(seed), ..SessionConfig::default() };
    let server = Server::bind("127.0.0.1:0", config).await.unwrap();
    let addr = server.local_addr().unwrap();
    tokio::spawn(server.run());
    format!("ws://{addr}")
}

async fn recv(ws: &mut Ws) -> ServerFrame {
    loop {
        let msg = timeout(Duration::from_secs(5), ws.next()).await.expect("frame in time").unwrap().unwrap();
        if let Message::Text(t) = msg {
            return serde_json::from_str(t.as_str()).unwrap();
        }
    }
}

/// Next frame that is not a heartbeat.
async fn recv_reply(ws: &mut Ws, expect_probs: bool) -> ServerFrame {
    loop {
        let f = recv(ws).await;
        if expect_probs || !matches!(f, ServerFrame::Probs { .. }) {
            return f;
        }
    }
}

async fn send(ws: &mut Ws, text: &str) {
    ws.send(Message::text(text)).await.unwrap();
}

#[tokio::test]
async fn headless_handshake() {
    let url = start(11).await;
    let (mut ws, _) = connect_async(&url).await.unwrap();
    assert!(matches!(recv(&mut ws).await, ServerFrame::Probs { .. }));

    send(&mut ws, r#"{"t":"setS","s":0}"#).await;
    let ServerFrame::Probs { p } = recv_reply(&mut ws, true).await else { panic!() };
    for (a, b) in p.iter().zip([0.5, 0.0, 0.0, 0.5]) {
        assert!((a - b).abs() < 1e-9, "{p:?}");
    }

    send(&mut ws, r#"{"t":"noteOn","note":60,"vel":96}"#).await;
    assert!(matches!(recv_reply(&mut ws, false).await, ServerFrame::QByte { .. }));
    let ServerFrame::QNote { note, vel, ttl_ms } = recv_reply(&mut ws, false).await else { panic!() };
    assert!((60..=84).contains(&note));
    assert_eq!((vel, ttl_ms), (96, 2000));

    send(&mut ws, "{}").await;
    assert!(matches!(recv_reply(&mut ws, false).await, ServerFrame::Err { .. }));

    // socket still serves requests after the error
    send(&mut ws, r#"{"t":"patch"}"#).await;
    let ServerFrame::SysEx { bytes } = recv_reply(&mut ws, false).await else { panic!() };
    assert_eq!((bytes[0], *bytes.last().unwrap()), (0xF0, 0xF7));
    ws.close(None).await.unwrap();
}

#[tokio::test]
async fn heartbeat_arrives_without_requests() {
    let url = start(1).await;
    let (mut ws, _) = connect_async(&url).await.unwrap();
    recv(&mut ws).await;
    let t = tokio::time::Instant::now();
    assert!(matches!(recv(&mut ws).await, ServerFrame::Probs { .. }));
    assert!(t.elapsed() <= Duration::from_millis(1500));
}

#[tokio::test]
async fn same_seed_same_transcript_across_connections() {
    let url = start(77).await;
    let script = [
        r#"{"t":"setS","s":0.25}"#,
        r#"{"t":"noteOn","note":62,"vel":70}"#,
        r#"{"t":"noteOn","note":65,"vel":71}"#,
        r#"{"t":"noteOff","note":65}"#,
        r#"{"t":"patch"}"#,
        r#"{"t":"setGain","g":0.1}"#,
    ];
    let mut transcripts = Vec::new();
    for _ in 0..2 {
        let (mut ws, _) = connect_async(&url).await.unwrap();
        recv(&mut ws).await;
        let mut got = Vec::new();
        for line in script {
            send(&mut ws, line).await;
            // replies per request: setS/setGain -> probs, noteOn -> qbyte+qnote, patch -> sysex, noteOff -> none
            let n = match line {
                l if l.contains("noteOn") => 2,
                l if l.contains("noteOff") => 0,
                _ => 1,
            };
            for _ in 0..n {
                got.push(recv_reply(&mut ws, line.contains("set")).await);
            }
        }
        transcripts.push(got);
    }
    assert_eq!(transcripts[0], transcripts[1]);
}
