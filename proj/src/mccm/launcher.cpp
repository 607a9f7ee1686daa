// Copyright 2026 The mcfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcfuzz/mccm/launcher.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>

#include "mcfuzz/common/error.hpp"

extern char** environ;

namespace mcfuzz::mccm {
namespace {

std::atomic<int> g_launcher_seq{0};

ExitDescriptor Describe(int wstatus, double at_s) {
  ExitDescriptor d;
  d.at_s = at_s;
  if (WIFSIGNALED(wstatus)) {
    d.signaled = true;
    d.value = WTERMSIG(wstatus);
  } else {
    d.value = WEXITSTATUS(wstatus);
  }
  return d;
}

}  // namespace

Launcher::Launcher(LauncherOptions options) : options_(std::move(options)), start_(Clock::now()) {
  if (options_.region_prefix.empty())
    options_.region_prefix = "/mcfuzz-" + std::to_string(::getpid()) + "-" +
                             std::to_string(g_launcher_seq.fetch_add(1));
}

Launcher::~Launcher() {
  StopMonitor();
  std::lock_guard lock(mu_);
  for (auto& [ch, c] : components_) {
    if (c.collector) c.collector->Stop();
    if (c.status.alive && c.status.pid > 0) {
      ::kill(c.status.pid, SIGKILL);
      ::waitpid(c.status.pid, nullptr, 0);
    }
  }
}

double Launcher::Elapsed() const {
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

pid_t Launcher::StartProcess(const Component& c) {
  // Everything the child needs is built before fork: only async-signal-safe
  // calls are allowed between fork and exec in a threaded parent.
  std::vector<std::string> argv_store;
  argv_store.push_back(c.spec.executable);
  argv_store.insert(argv_store.end(), c.spec.args.begin(), c.spec.args.end());
  std::vector<std::string> env_store;
  auto overridden = [&](const std::string& entry) {
    const std::string key = entry.substr(0, entry.find('='));
    if (key == "MCCM_REGION" || key == "MCCM_LISTEN" || key == "MCCM_CHANNEL") return true;
    for (const auto& [k, v] : c.spec.env)
      if (k == key) return true;
    return false;
  };
  for (char** e = environ; e && *e; ++e)
    if (!overridden(*e)) env_store.emplace_back(*e);
  for (const auto& [k, v] : c.spec.env) env_store.push_back(k + "=" + v);
  env_store.push_back("MCCM_REGION=" + c.spec.region_name);
  env_store.push_back("MCCM_CHANNEL=" + std::to_string(c.spec.channel));
  if (c.spec.listen_port != 0)
    env_store.push_back("MCCM_LISTEN=127.0.0.1:" + std::to_string(c.spec.listen_port));

  std::vector<char*> argv, envp;
  for (auto& s : argv_store) argv.push_back(s.data());
  argv.push_back(nullptr);
  for (auto& s : env_store) envp.push_back(s.data());
  envp.push_back(nullptr);

  const char* output = c.spec.output_path.empty() ? nullptr : c.spec.output_path.c_str();
  const pid_t parent = ::getpid();
  const pid_t pid = ::fork();
  if (pid < 0) throw TargetError("fork failed for component " + c.spec.name);
  if (pid == 0) {
    ::prctl(PR_SET_PDEATHSIG, SIGKILL);
    if (::getppid() != parent) ::_exit(127);
    ::signal(SIGPIPE, SIG_DFL);
    if (output) {
      const int fd = ::open(output, O_WRONLY | O_CREAT | O_APPEND, 0644);
      if (fd >= 0) {
        ::dup2(fd, STDOUT_FILENO);
        ::dup2(fd, STDERR_FILENO);
        if (fd > STDERR_FILENO) ::close(fd);
      }
    }
    sigset_t none;
    sigemptyset(&none);
    ::sigprocmask(SIG_SETMASK, &none, nullptr);
    ::execve(argv[0], argv.data(), envp.data());
    ::_exit(127);
  }
  return pid;
}

bool Launcher::WaitReady(Component& c) {
  const auto deadline = Clock::now() + std::chrono::milliseconds(options_.restart_timeout_ms);
  auto pause = std::chrono::microseconds(200);
  for (;;) {
    int wstatus = 0;
    if (::waitpid(c.status.pid, &wstatus, WNOHANG) == c.status.pid) {
      c.status.alive = false;
      c.status.last_exit = Describe(wstatus, Elapsed());
      return false;
    }
    if (c.spec.listen_port == 0) return true;
    Socket probe = ConnectTcp(Endpoint{"127.0.0.1", c.spec.listen_port}, std::chrono::milliseconds(50));
    if (probe.valid()) return true;
    if (Clock::now() >= deadline) return false;
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(20000));
  }
}

ComponentStatus Launcher::Spawn(const LaunchSpec& spec) {
  std::unique_lock lock(mu_);
  if (components_.count(spec.channel))
    throw ConfigError("channel " + std::to_string(spec.channel) + " already launched");
  Component c;
  c.spec = spec;
  if (c.spec.name.empty()) c.spec.name = "ch" + std::to_string(spec.channel);
  if (c.spec.region_name.empty())
    c.spec.region_name = options_.region_prefix + "-ch" + std::to_string(spec.channel);
  c.region = std::make_unique<SharedRegion>(
      SharedRegion::Create(c.spec.region_name, spec.channel, spec.map_size));
  c.status.channel = spec.channel;
  if (spec.start_collector) {
    CollectorOptions co;
    co.region_name = c.spec.region_name;
    co.channel = spec.channel;
    const ChannelId ch = spec.channel;
    co.status = [this, ch] { return Status(ch); };
    c.collector = std::make_unique<Collector>(std::move(co));
    c.collector->Start();
  }
  c.status.pid = StartProcess(c);
  c.status.alive = true;
  if (!WaitReady(c) && c.status.alive) {
    // Still running but never opened its port.
    ::kill(c.status.pid, SIGKILL);
    int wstatus = 0;
    ::waitpid(c.status.pid, &wstatus, 0);
    c.status.alive = false;
    c.status.last_exit = Describe(wstatus, Elapsed());
  }
  ComponentStatus st = c.status;
  components_.emplace(spec.channel, std::move(c));
  return st;
}

void Launcher::StartMonitor() {
  std::lock_guard lock(mu_);
  if (monitor_.joinable()) return;
  stop_ = false;
  monitor_ = std::thread([this] { MonitorLoop(); });
}

void Launcher::StopMonitor() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (monitor_.joinable()) monitor_.join();
}

void Launcher::BeginTestCase(uint64_t id) {
  in_flight_.store(static_cast<int64_t>(id));
  last_testcase_.store(static_cast<int64_t>(id));
}

void Launcher::EndTestCase() { in_flight_.store(-1); }

std::vector<ComponentEvent> Launcher::DrainEvents() {
  std::lock_guard lock(mu_);
  std::vector<ComponentEvent> out(events_.begin(), events_.end());
  events_.clear();
  return out;
}

void Launcher::PollOnce(bool restart) {
  const double now = Elapsed();
  for (auto& [ch, c] : components_) {
    bool crash_restart = false;
    if (c.status.alive) {
      int wstatus = 0;
      if (::waitpid(c.status.pid, &wstatus, WNOHANG) != c.status.pid) continue;
      ComponentEvent ev;
      ev.channel = ch;
      ev.pid = c.status.pid;
      ev.exit = Describe(wstatus, now);
      const int64_t in_flight = in_flight_.load();
      ev.crash = ev.exit.abnormal();
      if (ev.crash) {
        const int64_t attributed = in_flight >= 0 ? in_flight : last_testcase_.load();
        if (attributed >= 0) ev.testcase = static_cast<uint64_t>(attributed);
      } else if (in_flight >= 0) {
        ev.testcase = static_cast<uint64_t>(in_flight);
      }
      // Crashes attributed to a test case are the expected outcome of
      // fuzzing; only other restarts count toward the storm limit.
      crash_restart = ev.crash && ev.testcase.has_value();
      c.status.alive = false;
      c.status.last_exit = ev.exit;
      events_.push_back(ev);
    }
    if (!restart || storm_) continue;

    if (!crash_restart) {
      restart_times_.push_back(now);
      while (!restart_times_.empty() && now - restart_times_.front() > options_.storm_window_s)
        restart_times_.pop_front();
      if (static_cast<int>(restart_times_.size()) > options_.storm_limit) {
        storm_log_.push_back(c.spec.name + ": " +
                             (c.status.last_exit ? c.status.last_exit->ToString() : "no exit"));
        storm_ = true;
        continue;
      }
    }
    try {
      c.status.pid = StartProcess(c);
    } catch (const TargetError&) {
      continue;
    }
    c.status.alive = true;
    ++c.status.restart_count;
    if (!WaitReady(c) && c.status.alive) {
      ::kill(c.status.pid, SIGKILL);
      int wstatus = 0;
      ::waitpid(c.status.pid, &wstatus, 0);
      c.status.alive = false;
      c.status.last_exit = Describe(wstatus, Elapsed());
    }
    if (!c.status.alive && c.status.last_exit)
      storm_log_.push_back(c.spec.name + " failed to restart: " + c.status.last_exit->ToString());
  }
  cv_.notify_all();
}

void Launcher::MonitorLoop() {
  std::unique_lock lock(mu_);
  auto fast_until = Clock::time_point::min();
  while (!stop_) {
    const auto interval = Clock::now() < fast_until
                              ? std::chrono::milliseconds(1)
                              : std::chrono::milliseconds(options_.poll_interval_ms);
    cv_.wait_for(lock, interval, [&] { return stop_ || kicked_; });
    if (stop_) break;
    if (kicked_) {
      kicked_ = false;
      fast_until = Clock::now() + std::chrono::milliseconds(200);
    }
    PollOnce(/*restart=*/true);
  }
}

bool Launcher::AwaitRestart(ChannelId channel, uint32_t seen_restarts,
                            std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  const auto it = components_.find(channel);
  if (it == components_.end()) return false;
  kicked_ = true;
  cv_.notify_all();
  return cv_.wait_for(lock, timeout, [&] {
    const auto& st = it->second.status;
    return storm_ || (st.restart_count > seen_restarts && st.alive);
  }) && !storm_;
}

ComponentStatus Launcher::Status(ChannelId channel) const {
  std::lock_guard lock(mu_);
  const auto it = components_.find(channel);
  if (it == components_.end()) throw ConfigError("unknown channel " + std::to_string(channel));
  return it->second.status;
}

std::vector<ChannelId> Launcher::channels() const {
  std::lock_guard lock(mu_);
  std::vector<ChannelId> out;
  for (const auto& [ch, c] : components_) out.push_back(ch);
  return out;
}

SharedRegion& Launcher::region(ChannelId channel) {
  std::lock_guard lock(mu_);
  return *components_.at(channel).region;
}

CollectorEndpoint Launcher::collector_endpoint(ChannelId channel) const {
  std::lock_guard lock(mu_);
  const Component& c = components_.at(channel);
  if (!c.collector) throw ConfigError("channel " + std::to_string(channel) + " has no collector");
  return CollectorEndpoint{channel, c.collector->endpoint(), c.spec.region_name,
                           c.spec.collector_timeout_ms};
}

void Launcher::Kill(ChannelId channel) {
  std::lock_guard lock(mu_);
  const auto& st = components_.at(channel).status;
  if (st.alive && st.pid > 0) ::kill(st.pid, SIGKILL);
}

std::string Launcher::storm_diagnostics() const {
  std::lock_guard lock(mu_);
  std::string out = std::to_string(restart_times_.size()) + " restarts within " +
                    std::to_string(static_cast<int>(options_.storm_window_s)) + " s";
  for (const auto& line : storm_log_) out += "; " + line;
  return out;
}

}  // namespace mcfuzz::mccm
