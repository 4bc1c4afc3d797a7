#include "guardrails/service/server.hpp"

#include <chrono>
#include <deque>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "guardrails/service/protocol.hpp"

namespace guardrails::service {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

struct Outgoing {
  std::string text;
  bool droppable = false;
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
  Connection(tcp::socket&& socket, std::string id, const ServerOptions& opts)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), opts_(opts), session_(std::move(id), opts.session) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    enqueue(scenario_list_frame(opts_.session.default_scenario), false);
    do_read();
    next_ = Clock::now();
    schedule();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      shutdown();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    const bool was_running = session_.running();
    Reply reply = handle_message(session_, text, every_);
    if (!was_running && session_.running()) next_ = Clock::now();
    for (auto& f : reply.frames) enqueue(std::move(f), false);
    if (reply.close) {
      closing_ = true;
      if (!writing_) do_close();
      return;
    }
    do_read();
  }

  void schedule() {
    timer_.expires_at(next_);
    timer_.async_wait(beast::bind_front_handler(&Connection::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closed_) return;
    const auto dt = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(session_.sim_dt()));
    // Absolute deadlines: late ticks are caught up so the sim clock stays pinned to wall time.
    int budget = 5;
    while (Clock::now() >= next_ && budget-- > 0) {
      if (const sim::TraceRecord* rec = session_.tick()) {
        if (ticks_++ % every_ == 0) enqueue(telemetry_frame(session_, *rec, dropped_), true);
      }
      next_ += dt;
    }
    if (Clock::now() >= next_) next_ = Clock::now() + dt;
    schedule();
  }

  void enqueue(std::string text, bool droppable) {
    if (closed_) return;
    if (queue_.size() >= opts_.queue_capacity) {
      auto it = queue_.begin() + (writing_ ? 1 : 0);
      for (; it != queue_.end(); ++it)
        if (it->droppable) break;
      if (it != queue_.end()) {
        queue_.erase(it);
        ++dropped_;
      } else if (droppable) {
        ++dropped_;
        return;
      }
    }
    queue_.push_back({std::move(text), droppable});
    if (!writing_) do_write();
  }

  void do_write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front().text),
                    beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    writing_ = false;
    if (ec) {
      shutdown();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) {
      do_write();
    } else if (closing_) {
      do_close();
    }
  }

  void do_close() {
    closing_ = false;
    ws_.async_close(websocket::close_code::policy_error,
                    [self = shared_from_this()](beast::error_code) { self->shutdown(); });
  }

  void shutdown() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    queue_.clear();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  const ServerOptions& opts_;
  Session session_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> queue_;
  bool writing_ = false;
  bool closing_ = false;
  bool closed_ = false;
  int every_ = 1;
  std::uint64_t ticks_ = 0;
  std::uint64_t dropped_ = 0;
  Clock::time_point next_;
};

}  // namespace

struct Server::Impl {
  ServerOptions opts;
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::atomic<std::uint64_t> next_id{0};

  explicit Impl(ServerOptions o) : opts(std::move(o)), ioc(std::max(1, opts.threads)) {}

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        const std::string id = "s" + std::to_string(next_id++);
        std::make_shared<Connection>(std::move(socket), id, opts)->run();
      }
      do_accept();
    });
  }
};

Server::Server(ServerOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

Server::~Server() { stop(); }

unsigned short Server::listen() {
  const std::string& bind = impl_->opts.bind;
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw std::runtime_error("bind address must be host:port, got '" + bind + "'");
  try {
    const auto addr = net::ip::make_address(bind.substr(0, colon));
    const auto port = static_cast<unsigned short>(std::stoul(bind.substr(colon + 1)));
    tcp::endpoint ep(addr, port);
    auto& a = impl_->acceptor;
    a.open(ep.protocol());
    a.set_option(net::socket_base::reuse_address(true));
    a.bind(ep);
    a.listen(net::socket_base::max_listen_connections);
    impl_->do_accept();
    return a.local_endpoint().port();
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot bind " + bind + ": " + e.what());
  }
}

void Server::run() {
  std::vector<std::thread> pool;
  for (int i = 1; i < impl_->opts.threads; ++i) pool.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto& t : pool) t.join();
}

void Server::stop() {
  if (impl_) impl_->ioc.stop();
}

}  // namespace guardrails::service
