#pragma once

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nspg/classify.hpp"
#include "nspg/errors.hpp"
#include "nspg/formalize.hpp"

// Client for external model adapters speaking newline-delimited JSON, either
// over a child process's standard streams ("exec:COMMAND") or a TCP endpoint
// ("tcp://HOST:PORT").  Requests carry an id; replies may arrive out of order
// and are matched back by id.

namespace nspg {

struct AdapterEndpoint {
    enum class Kind { exec, tcp };
    Kind kind = Kind::exec;
    std::string command;  // exec: shell command line
    std::string host;     // tcp
    std::string port;     // tcp

    std::string describe() const {
        if (kind == Kind::exec) return "exec:" + command;
        return "tcp://" + host + ":" + port;
    }
};

inline AdapterEndpoint parse_adapter_endpoint(std::string_view spec) {
    AdapterEndpoint ep;
    if (starts_with(spec, "exec:")) {
        ep.kind = AdapterEndpoint::Kind::exec;
        ep.command = trim(spec.substr(5));
        if (ep.command.empty()) throw ConfigError("adapter endpoint has an empty command");
        return ep;
    }
    if (starts_with(spec, "tcp://")) {
        ep.kind = AdapterEndpoint::Kind::tcp;
        std::string_view rest = spec.substr(6);
        std::size_t colon = rest.rfind(':');
        if (colon == std::string_view::npos || colon == 0 || colon + 1 == rest.size())
            throw ConfigError("tcp adapter endpoint must be tcp://HOST:PORT, got " +
                              std::string(spec));
        ep.host = std::string(rest.substr(0, colon));
        ep.port = std::string(rest.substr(colon + 1));
        for (char c : ep.port)
            if (!ascii_digit(c))
                throw ConfigError("adapter endpoint port is not numeric: " + std::string(spec));
        return ep;
    }
    throw ConfigError("adapter endpoint must start with exec: or tcp://, got " +
                      std::string(spec));
}

// The NSPG_ADAPTER environment variable overrides any configured endpoint.
inline std::string resolve_adapter_endpoint(const std::string& configured) {
    if (const char* env = std::getenv("NSPG_ADAPTER"); env && *env) return env;
    return configured;
}

struct AdapterOptions {
    double timeout_seconds = 30.0;  // per request
    int max_in_flight = 8;          // pipelining window for batch calls
};

class AdapterConnection {
public:
    explicit AdapterConnection(std::string_view endpoint_spec, AdapterOptions options = {})
        : endpoint_(parse_adapter_endpoint(endpoint_spec)), options_(options) {
        if (!(options_.timeout_seconds > 0.0))
            throw ConfigError("adapter timeout must be positive");
        if (options_.max_in_flight < 1)
            throw ConfigError("adapter in-flight limit must be at least 1");
        ::signal(SIGPIPE, SIG_IGN);
        if (endpoint_.kind == AdapterEndpoint::Kind::exec) {
            spawn_child();
        } else {
            connect_tcp();
        }
    }

    AdapterConnection(const AdapterConnection&) = delete;
    AdapterConnection& operator=(const AdapterConnection&) = delete;

    ~AdapterConnection() { close_transport(); }

    const AdapterEndpoint& endpoint() const { return endpoint_; }
    const AdapterOptions& options() const { return options_; }

    double classify(std::string_view text) {
        std::string id = next_id();
        send_request({{"id", id}, {"op", "classify"}, {"text", std::string(text)}});
        return parse_score(take_reply(id), id);
    }

    std::vector<std::vector<std::string>> fill_mask(std::string_view text) {
        std::string id = next_id();
        send_request({{"id", id}, {"op", "fill_mask"}, {"text", std::string(text)}});
        nlohmann::json reply = take_reply(id);
        try {
            return reply.at("candidates").get<std::vector<std::vector<std::string>>>();
        } catch (const nlohmann::json::exception& e) {
            throw AdapterError("adapter reply " + id + " has malformed candidates: " + e.what());
        }
    }

    // Pipelined scoring: up to max_in_flight requests outstanding, results
    // returned in input order.  An error reply aborts the whole batch.
    std::vector<double> classify_batch(const std::vector<std::string>& texts) {
        std::vector<double> scores(texts.size());
        std::map<std::string, std::size_t> waiting;  // id -> index into texts
        std::size_t sent = 0, done = 0;
        while (done < texts.size()) {
            while (sent < texts.size() &&
                   waiting.size() < static_cast<std::size_t>(options_.max_in_flight)) {
                std::string id = next_id();
                send_request({{"id", id}, {"op", "classify"}, {"text", texts[sent]}});
                waiting.emplace(std::move(id), sent++);
            }
            auto [id, reply] = take_any_reply(waiting);
            std::size_t index = waiting.at(id);
            waiting.erase(id);
            scores[index] = parse_score(std::move(reply), id);
            ++done;
        }
        return scores;
    }

private:
    using Clock = std::chrono::steady_clock;

    std::string next_id() { return "r" + std::to_string(++request_counter_); }

    static double seconds_left(Clock::time_point deadline) {
        return std::chrono::duration<double>(deadline - Clock::now()).count();
    }

    Clock::time_point request_deadline() const {
        return Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(options_.timeout_seconds));
    }

    void send_request(const nlohmann::json& request) {
        std::string line = request.dump();
        line += '\n';
        std::size_t off = 0;
        while (off < line.size()) {
            ssize_t n = ::write(write_fd_, line.data() + off, line.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw AdapterError("cannot write to adapter " + endpoint_.describe() + ": " +
                                   std::strerror(errno));
            }
            off += static_cast<std::size_t>(n);
        }
    }

    double parse_score(nlohmann::json reply, const std::string& id) {
        double score = 0.0;
        try {
            score = reply.at("score").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw AdapterError("adapter reply " + id + " has no usable score: " + e.what());
        }
        if (!(score >= 0.0 && score <= 1.0))
            throw AdapterError("adapter score out of [0,1] for request " + id + ": " +
                               std::to_string(score));
        return score;
    }

    // Waits for the reply to one id; error replies surface as AdapterError.
    nlohmann::json take_reply(const std::string& id) {
        auto deadline = request_deadline();
        for (;;) {
            auto it = pending_.find(id);
            if (it != pending_.end()) {
                nlohmann::json reply = std::move(it->second);
                pending_.erase(it);
                return check_error(std::move(reply), id);
            }
            read_some(deadline);
        }
    }

    // Waits until a reply for any id in `waiting` is available.
    std::pair<std::string, nlohmann::json> take_any_reply(
        const std::map<std::string, std::size_t>& waiting) {
        auto deadline = request_deadline();
        for (;;) {
            for (const auto& [id, index] : waiting) {
                auto it = pending_.find(id);
                if (it != pending_.end()) {
                    nlohmann::json reply = std::move(it->second);
                    pending_.erase(it);
                    return {id, check_error(std::move(reply), id)};
                }
            }
            read_some(deadline);
        }
    }

    nlohmann::json check_error(nlohmann::json reply, const std::string& id) {
        if (reply.contains("error"))
            throw AdapterError("adapter error for request " + id + ": " +
                               reply.at("error").get<std::string>());
        return reply;
    }

    // One poll+read cycle; parses every complete line into pending_.
    void read_some(Clock::time_point deadline) {
        double left = seconds_left(deadline);
        if (left <= 0.0)
            throw AdapterError("adapter request timed out after " +
                               std::to_string(options_.timeout_seconds) + " s (" +
                               endpoint_.describe() + ")");
        struct pollfd pfd {};
        pfd.fd = read_fd_;
        pfd.events = POLLIN;
        int rc = ::poll(&pfd, 1, static_cast<int>(left * 1000.0) + 1);
        if (rc < 0) {
            if (errno == EINTR) return;
            throw AdapterError(std::string("poll failed on adapter connection: ") +
                               std::strerror(errno));
        }
        if (rc == 0)
            throw AdapterError("adapter request timed out after " +
                               std::to_string(options_.timeout_seconds) + " s (" +
                               endpoint_.describe() + ")");
        char chunk[4096];
        ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) return;
            throw AdapterError(std::string("cannot read from adapter: ") + std::strerror(errno));
        }
        if (n == 0)
            throw AdapterError("adapter closed the connection (" + endpoint_.describe() + ")");
        buffer_.append(chunk, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (;;) {
            std::size_t nl = buffer_.find('\n', start);
            if (nl == std::string::npos) break;
            std::string line = buffer_.substr(start, nl - start);
            start = nl + 1;
            if (trim(line).empty()) continue;
            store_reply(line);
        }
        buffer_.erase(0, start);
    }

    void store_reply(const std::string& line) {
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw AdapterError(std::string("adapter sent invalid JSON: ") + e.what());
        }
        if (!reply.is_object() || !reply.contains("id") || !reply.at("id").is_string())
            throw AdapterError("adapter sent a reply without a string id: " + line);
        if (pending_.size() >= 4096)
            throw AdapterError("too many unmatched adapter replies");
        std::string reply_id = reply.at("id").get<std::string>();
        pending_.insert_or_assign(std::move(reply_id), std::move(reply));
    }

    void spawn_child() {
        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
            throw AdapterError(std::string("cannot create adapter pipes: ") +
                               std::strerror(errno));
        pid_t pid = ::fork();
        if (pid < 0)
            throw AdapterError(std::string("cannot fork adapter process: ") +
                               std::strerror(errno));
        if (pid == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", endpoint_.command.c_str(), (char*)nullptr);
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        write_fd_ = to_child[1];
        read_fd_ = from_child[0];
        child_pid_ = pid;
    }

    void connect_tcp() {
        struct addrinfo hints {};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        struct addrinfo* info = nullptr;
        int rc = ::getaddrinfo(endpoint_.host.c_str(), endpoint_.port.c_str(), &hints, &info);
        if (rc != 0)
            throw AdapterError("cannot resolve adapter host " + endpoint_.host + ": " +
                               ::gai_strerror(rc));
        int fd = -1;
        std::string last_error = "no addresses";
        for (struct addrinfo* ai = info; ai; ai = ai->ai_next) {
            fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
            if (fd < 0) {
                last_error = std::strerror(errno);
                continue;
            }
            if (connect_with_timeout(fd, ai, last_error)) break;
            ::close(fd);
            fd = -1;
        }
        ::freeaddrinfo(info);
        if (fd < 0)
            throw AdapterError("cannot connect to adapter " + endpoint_.describe() + ": " +
                               last_error);
        read_fd_ = fd;
        write_fd_ = fd;
    }

    bool connect_with_timeout(int fd, const struct addrinfo* ai, std::string& last_error) {
        int flags = ::fcntl(fd, F_GETFL, 0);
        ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno != EINPROGRESS) {
            last_error = std::strerror(errno);
            return false;
        }
        if (rc != 0) {
            struct pollfd pfd {};
            pfd.fd = fd;
            pfd.events = POLLOUT;
            int ready = ::poll(&pfd, 1, static_cast<int>(options_.timeout_seconds * 1000.0) + 1);
            if (ready <= 0) {
                last_error = ready == 0 ? "connect timed out" : std::strerror(errno);
                return false;
            }
            int err = 0;
            socklen_t len = sizeof err;
            ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
            if (err != 0) {
                last_error = std::strerror(err);
                return false;
            }
        }
        ::fcntl(fd, F_SETFL, flags);
        return true;
    }

    void close_transport() {
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        if (read_fd_ >= 0) ::close(read_fd_);
        write_fd_ = -1;
        read_fd_ = -1;
        if (child_pid_ > 0) {
            // A well-behaved adapter exits on stdin EOF; escalate if it lingers.
            int status = 0;
            for (int i = 0; i < 100; ++i) {
                if (::waitpid(child_pid_, &status, WNOHANG) != 0) {
                    child_pid_ = -1;
                    return;
                }
                ::usleep(20000);
            }
            ::kill(child_pid_, SIGKILL);
            ::waitpid(child_pid_, &status, 0);
            child_pid_ = -1;
        }
    }

    AdapterEndpoint endpoint_;
    AdapterOptions options_;
    int read_fd_ = -1;
    int write_fd_ = -1;
    pid_t child_pid_ = -1;
    std::uint64_t request_counter_ = 0;
    std::string buffer_;
    std::map<std::string, nlohmann::json> pending_;
};

// Mask filler backed by an external model; the top-ranked candidate fills each
// mask.  Any adapter failure falls back to the rules filler and is recorded as
// a warning instead of aborting the run.
class AdapterFiller : public MaskFiller {
public:
    AdapterFiller(AdapterConnection& connection, const Lexicon& lexicon)
        : connection_(&connection), rules_(lexicon) {}

    std::string name() const override { return "adapter"; }

    std::string fill(const MaskedFragment& fragment) override {
        std::size_t masks = 0;
        for (const auto& tok : fragment.tokens)
            if (tok.core == kMaskToken) ++masks;
        try {
            auto candidates = connection_->fill_mask(fragment.text());
            if (candidates.size() != masks)
                throw AdapterError("adapter returned " + std::to_string(candidates.size()) +
                                   " candidate lists for " + std::to_string(masks) + " masks");
            for (const auto& list : candidates)
                if (list.empty() || list.front().empty())
                    throw AdapterError("adapter returned an empty candidate list");
            auto tokens = fragment.tokens;
            std::size_t next = 0;
            for (auto& tok : tokens)
                if (tok.core == kMaskToken) tok.core = candidates[next++].front();
            return join_word_tokens(tokens);
        } catch (const AdapterError& e) {
            warnings_.push_back(std::string("falling back to rules filler: ") + e.what());
            return rules_.fill(fragment);
        }
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    AdapterConnection* connection_;
    RulesFiller rules_;
    std::vector<std::string> warnings_;
};

// Scores every example through the adapter and folds the confusion counts
// into the standard metrics.
inline Metrics evaluate_adapter(AdapterConnection& connection,
                                const std::vector<LabeledExample>& examples,
                                double threshold = kDecisionThreshold) {
    if (examples.empty()) throw ValidationError("cannot evaluate on an empty set");
    std::vector<std::string> texts;
    texts.reserve(examples.size());
    for (const auto& ex : examples) texts.push_back(ex.record.text);
    std::vector<double> scores = connection.classify_batch(texts);
    long long tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        bool positive = scores[i] > threshold;
        if (examples[i].label == 1) {
            (positive ? tp : fn) += 1;
        } else {
            (positive ? fp : tn) += 1;
        }
    }
    return compute_metrics(tp, fp, fn, tn);
}

}  // namespace nspg
