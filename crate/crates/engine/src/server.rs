//! WebSocket transport for [`Session`]. One independent session per connection;
//! its state is dropped with the socket.

use std::io;
use std::net::SocketAddr;
use std::time::{Duration, Instant};

use futures_util::{SinkExt, StreamExt};
use tokio::net::{TcpListener, TcpStream, ToSocketAddrs};
use tokio_tungstenite::tungstenite::Message;

use crate::session::{ServerFrame, Session, SessionConfig};

pub struct Server {
    listener: TcpListener,
    config: SessionConfig,
}

impl Server {
    pub async fn bind(addr: impl ToSocketAddrs, config: SessionConfig) -> io::Result<Self> {
        config.validate().map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
        Ok(Self { listener: TcpListener::bind(addr).await?, config })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections forever.
    pub async fn run(self) -> io::Result<()> {
        loop {
            let (stream, peer) = self.listener.accept().await?;
            let config = self.config.clone();
            tokio::spawn(async move {
                match connection(stream, config).await {
                    Ok(()) => log::info!("{peer}: closed"),
                    Err(e) => log::warn!("{peer}: {e}"),
                }
            });
        }
    }
}

async fn send_all<S>(sink: &mut S, frames: Vec<ServerFrame>) -> Result<(), tokio_tungstenite::tungstenite::Error>
where
    S: SinkExt<Message, Error = tokio_tungstenite::tungstenite::Error> + Unpin,
{
    for f in frames {
        sink.send(Message::text(f.to_json())).await?;
    }
    Ok(())
}

async fn connection(stream: TcpStream, config: SessionConfig) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let ws = tokio_tungstenite::accept_async(stream).await?;
    let (mut tx, mut rx) = ws.split();
    let mut session = Session::new(&config)?;
    let start = Instant::now();
    let now = || start.elapsed().as_millis() as u64;

    send_all(&mut tx, session.open(now())).await?;
    let mut heartbeat = tokio::time::interval(Duration::from_millis(config.heartbeat_ms));
    heartbeat.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);

    loop {
        tokio::select! {
            msg = rx.next() => {
                let Some(msg) = msg else { return Ok(()) };
                match msg? {
                    Message::Text(text) => send_all(&mut tx, session.handle_text(text.as_str(), now())).await?,
                    Message::Binary(_) => send_all(&mut tx, vec![ServerFrame::Err { msg: "binary frames are not supported".into() }]).await?,
                    Message::Close(_) => return Ok(()),
                    _ => {}
                }
            }
            _ = heartbeat.tick() => send_all(&mut tx, session.tick(now())).await?,
        }
    }
}

/// Builds a runtime and serves on `addr` until the process is stopped.
pub fn serve_blocking(addr: SocketAddr, config: SessionConfig) -> io::Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async {
        let server = Server::bind(addr, config).await?;
        log::info!("listening on ws://{}", server.local_addr()?);
        server.run().await
    })
}
