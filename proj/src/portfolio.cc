// SPDX-License-Identifier: Apache-2.0

#include "feq/portfolio.hh"
#include "feq/errors.hh"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace feq {

std::string default_config_path()
{
	if (const char *env = std::getenv("FUNC_EQ_SOLVER_CONFIG"); env && *env)
		return env;
	return FEQ_DEFAULT_CONFIG;
}

std::vector<SolverConfig> load_solver_configs(const std::string &path)
{
	namespace pt = boost::property_tree;
	pt::ptree tree;
	try {
		pt::read_ini(path, tree);
	} catch (const pt::ini_parser_error &e) {
		throw error("cannot read solver config: " + std::string(e.what()));
	}
	std::string confdir = fs::absolute(fs::path(path)).parent_path().string();
	std::vector<SolverConfig> out;
	for (const auto &[id, sec] : tree) {
		SolverConfig c;
		c.id = id;
		c.confdir = confdir;
		try {
			c.command = sec.get<std::string>("cmd");
			c.timeout = sec.get<double>("timeout", 120);
			c.enabled = sec.get<bool>("enabled", true);
			if (auto m = sec.get_optional<unsigned>("memory_mb"))
				c.memory_mb = *m;
			c.lemmas = sec.get<bool>("lemmas", true);
			c.version_command = sec.get<std::string>("version", "");
		} catch (const pt::ptree_error &e) {
			throw error("solver " + id + ": " + e.what());
		}
		size_t first = c.command.find("{file}");
		if (first == std::string::npos || c.command.find("{file}", first + 1) != std::string::npos)
			throw error("solver " + id + ": cmd must contain {file} exactly once");
		if (!(c.timeout > 0))
			throw error("solver " + id + ": timeout must be positive");
		out.push_back(std::move(c));
	}
	return out;
}

static void replace_all(std::string &s, const std::string &from, const std::string &to)
{
	for (size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
		s.replace(p, from.size(), to);
}

std::vector<std::string> expand_command(const SolverConfig &c, const std::string &file, double timeout)
{
	std::vector<std::string> argv;
	std::istringstream in(c.command);
	std::string w;
	while (in >> w) {
		replace_all(w, "{file}", file);
		replace_all(w, "{timeout}", std::to_string(static_cast<long>(std::ceil(timeout))));
		replace_all(w, "{timeout_ms}", std::to_string(static_cast<long>(std::ceil(timeout * 1000))));
		replace_all(w, "{confdir}", c.confdir);
		argv.push_back(w);
	}
	return argv;
}

// ------------------------------------------------------------ soundness

namespace {

std::mutex monitor_mu;
std::map<size_t, std::set<Status>> monitor_seen;

} // namespace

void SoundnessMonitor::record(size_t h, Status s)
{
	std::lock_guard lk(monitor_mu);
	auto &e = monitor_seen[h];
	if (s == Status::Sat || s == Status::Unsat)
		e.insert(s);
}

size_t SoundnessMonitor::conflicts()
{
	std::lock_guard lk(monitor_mu);
	size_t n = 0;
	for (const auto &[h, s] : monitor_seen)
		n += s.count(Status::Sat) && s.count(Status::Unsat);
	return n;
}

size_t SoundnessMonitor::scripts_seen()
{
	std::lock_guard lk(monitor_mu);
	return monitor_seen.size();
}

// ------------------------------------------------------------ processes

namespace {

std::string slurp(const fs::path &p)
{
	std::ifstream in(p);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

class Process {
public:
	/// Returns false with errno_out set when exec failed.
	bool start(const std::vector<std::string> &args, const fs::path &out, const fs::path &err,
	           std::optional<unsigned> memory_mb, int &errno_out)
	{
		std::vector<char *> argv;
		for (const auto &a : args)
			argv.push_back(const_cast<char *>(a.c_str()));
		argv.push_back(nullptr);
		std::string out_s = out.string(), err_s = err.string();
		int pfd[2];
		if (pipe2(pfd, O_CLOEXEC) != 0) {
			errno_out = errno;
			return false;
		}
		rlim_t mem = memory_mb ? rlim_t(*memory_mb) << 20 : 0;
		pid_t pid = fork();
		if (pid < 0) {
			errno_out = errno;
			close(pfd[0]);
			close(pfd[1]);
			return false;
		}
		if (pid == 0) {
			setpgid(0, 0);
			if (mem) {
				struct rlimit rl{mem, mem};
				setrlimit(RLIMIT_AS, &rl);
			}
			int in = open("/dev/null", O_RDONLY);
			int o = open(out_s.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
			int e = open(err_s.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
			if (in >= 0)
				dup2(in, 0);
			if (o >= 0)
				dup2(o, 1);
			if (e >= 0)
				dup2(e, 2);
			execvp(argv[0], argv.data());
			int code = errno;
			ssize_t w = write(pfd[1], &code, sizeof code);
			(void)w;
			_exit(127);
		}
		close(pfd[1]);
		setpgid(pid, pid);
		int code = 0;
		ssize_t n;
		do
			n = read(pfd[0], &code, sizeof code);
		while (n < 0 && errno == EINTR);
		close(pfd[0]);
		if (n == sizeof code) {
			int st;
			waitpid(pid, &st, 0);
			errno_out = code;
			return false;
		}
		pid_ = pid;
		started_ = Clock::now();
		return true;
	}

	/// Non-blocking; true once the process has exited.
	bool poll()
	{
		if (done_)
			return true;
		int st;
		pid_t r = waitpid(pid_, &st, WNOHANG);
		if (r == pid_) {
			finish(st);
			return true;
		}
		return false;
	}

	/// Kills the whole process group: SIGTERM, then SIGKILL after `grace`.
	void kill(std::chrono::milliseconds grace)
	{
		if (done_)
			return;
		::kill(-pid_, SIGTERM);
		auto until = Clock::now() + grace;
		while (Clock::now() < until) {
			if (poll()) {
				::kill(-pid_, SIGKILL);
				return;
			}
			std::this_thread::sleep_for(std::chrono::milliseconds(5));
		}
		::kill(-pid_, SIGKILL);
		int st;
		waitpid(pid_, &st, 0);
		finish(st);
	}

	ExitInfo exit_info() const { return exit_; }
	double elapsed() const { return std::chrono::duration<double>(ended_ - started_).count(); }
	Clock::time_point started() const { return started_; }

private:
	void finish(int st)
	{
		done_ = true;
		ended_ = Clock::now();
		if (WIFSIGNALED(st)) {
			exit_.signaled = true;
			exit_.code = 128 + WTERMSIG(st);
		} else {
			exit_.code = WEXITSTATUS(st);
		}
	}

	pid_t pid_ = -1;
	bool done_ = false;
	Clock::time_point started_, ended_;
	ExitInfo exit_;
};

std::mutex archive_mu;

fs::path unique_dir(const fs::path &base, const std::string &name)
{
	std::lock_guard lk(archive_mu);
	fs::path p = base / name;
	for (int k = 2; fs::exists(p); k++)
		p = base / (name + "-" + std::to_string(k));
	fs::create_directories(p);
	return p;
}

fs::path temp_dir()
{
	std::string tmpl = (fs::temp_directory_path() / "feq-XXXXXX").string();
	if (!mkdtemp(tmpl.data()))
		throw error("cannot create temporary directory");
	return tmpl;
}

struct Slot {
	size_t config;
	Process proc;
	Clock::time_point deadline;
	double timeout;
	bool timed_out = false;
};

} // namespace

PortfolioResult run_portfolio(const std::string &script, const std::vector<SolverConfig> &configs,
                              const PortfolioOptions &opts)
{
	std::vector<size_t> queue;
	for (size_t i = 0; i < configs.size(); i++)
		if (configs[i].enabled)
			queue.push_back(i);
	if (queue.empty())
		throw no_solvers_available("no enabled solver configurations");

	fs::path dir = opts.archive_dir ? unique_dir(*opts.archive_dir, opts.obligation_id) : temp_dir();
	size_t script_hash = std::hash<std::string>{}(script);

	PortfolioResult res;
	std::map<size_t, SolverVerdict> runs;
	std::vector<std::unique_ptr<Slot>> active;
	size_t next = 0, not_found = 0;
	std::optional<size_t> winner;
	bool saw_sat = false, saw_unsat = false;

	auto collect = [&](Slot &s) {
		const auto &c = configs[s.config];
		ExitInfo ei = s.proc.exit_info();
		ei.timed_out = s.timed_out;
		auto v = parse_solver_output(slurp(dir / (c.id + ".out")), slurp(dir / (c.id + ".err")), ei);
		v.solver_id = c.id;
		v.wall_time = s.proc.elapsed();
		spdlog::debug("solver {}: {} in {:.2f}s", c.id, to_string(v.status), v.wall_time);
		SoundnessMonitor::record(script_hash, v.status);
		saw_sat |= v.status == Status::Sat;
		saw_unsat |= v.status == Status::Unsat;
		if (v.definitive() && !winner)
			winner = s.config;
		runs[s.config] = v;
	};

	while ((next < queue.size() && !winner) || !active.empty()) {
		while (!winner && next < queue.size() && active.size() < std::max<size_t>(1, opts.parallelism)) {
			size_t ci = queue[next++];
			const auto &c = configs[ci];
			double timeout = opts.timeout.value_or(c.timeout);
			auto now = Clock::now();
			auto deadline = now + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout));
			if (opts.deadline && *opts.deadline < deadline)
				deadline = *opts.deadline;
			if (deadline <= now) {
				SolverVerdict v;
				v.status = Status::Timeout;
				v.solver_id = c.id;
				v.cancelled = true;
				runs[ci] = v;
				continue;
			}
			fs::path file = dir / (c.id + ".smt2");
			std::ofstream(file) << script;
			auto slot = std::make_unique<Slot>();
			slot->config = ci;
			slot->deadline = deadline;
			slot->timeout = timeout;
			int err = 0;
			if (!slot->proc.start(expand_command(c, file.string(), timeout), dir / (c.id + ".out"),
			                      dir / (c.id + ".err"), c.memory_mb, err)) {
				spdlog::info("solver {}: cannot start: {}", c.id, std::strerror(err));
				SolverVerdict v;
				v.status = Status::Crash;
				v.solver_id = c.id;
				v.not_found = true;
				runs[ci] = v;
				not_found++;
				continue;
			}
			active.push_back(std::move(slot));
		}
		for (auto it = active.begin(); it != active.end();) {
			Slot &s = **it;
			bool done = s.proc.poll();
			if (!done && Clock::now() >= s.deadline) {
				s.timed_out = true;
				s.proc.kill(std::chrono::milliseconds(200));
				done = true;
			}
			if (done) {
				collect(s);
				it = active.erase(it);
			} else {
				++it;
			}
		}
		if (winner) {
			for (auto &s : active) {
				if (s->proc.poll()) {
					collect(*s);
					continue;
				}
				s->proc.kill(std::chrono::milliseconds(2000));
				SolverVerdict v;
				v.status = Status::Timeout;
				v.solver_id = configs[s->config].id;
				v.cancelled = true;
				v.wall_time = s->proc.elapsed();
				runs[s->config] = v;
			}
			active.clear();
			break;
		}
		std::this_thread::sleep_for(std::chrono::milliseconds(5));
	}
	for (; next < queue.size(); next++) {
		SolverVerdict v;
		v.status = Status::Timeout;
		v.solver_id = configs[queue[next]].id;
		v.cancelled = true;
		runs[queue[next]] = v;
	}

	for (auto i : queue)
		res.all_runs.push_back(runs[i]);
	if (winner) {
		res.verdict = runs[*winner];
	} else {
		bool all_timeout = std::all_of(res.all_runs.begin(), res.all_runs.end(),
		                               [](const SolverVerdict &v) { return v.status == Status::Timeout; });
		res.verdict.status = all_timeout ? Status::Timeout : Status::Unknown;
		for (const auto &v : res.all_runs)
			res.verdict.wall_time = std::max(res.verdict.wall_time, v.wall_time);
	}

	if (opts.archive_dir) {
		nlohmann::json j;
		j["obligation"] = opts.obligation_id;
		j["verdict"] = to_string(res.verdict.status);
		j["winner"] = res.verdict.solver_id;
		j["script"] = queue.empty() ? "" : configs[queue[0]].id + ".smt2";
		for (auto i : queue) {
			const auto &c = configs[i];
			const auto &v = runs[i];
			j["runs"].push_back({{"solver", c.id},
			                     {"cmd", c.command},
			                     {"confdir", c.confdir},
			                     {"timeout", opts.timeout.value_or(c.timeout)},
			                     {"memory_mb", c.memory_mb ? nlohmann::json(*c.memory_mb) : nlohmann::json()},
			                     {"status", to_string(v.status)},
			                     {"wall_s", v.wall_time},
			                     {"cancelled", v.cancelled},
			                     {"not_found", v.not_found}});
		}
		std::ofstream(dir / "result.json") << j.dump(2) << "\n";
		res.artifact_dir = dir.string();
	} else {
		std::error_code ec;
		fs::remove_all(dir, ec);
	}

	if (not_found == queue.size())
		throw no_solvers_available("none of the configured solvers could be started");
	if (saw_sat && saw_unsat)
		throw soundness_alarm("solvers disagree (sat and unsat) on obligation " + opts.obligation_id);
	return res;
}

// ----------------------------------------------------------------- probe

namespace {

const char *probe_script =
	"(set-logic UFNRA)\n"
	"(declare-fun f (Real) Real)\n"
	"(declare-const c Real)\n"
	"(assert (= (f c) (* c c)))\n"
	"(assert (< (f c) 0))\n"
	"(check-sat)\n(exit)\n";

std::mutex probe_mu;
std::map<std::string, ProbeEntry> probe_cache;

std::string version_of(const SolverConfig &c)
{
	if (c.version_command.empty())
		return "";
	SolverConfig v = c;
	v.command = c.version_command;
	auto dir = temp_dir();
	auto args = expand_command(v, "", 5);
	Process p;
	int err = 0;
	std::string line;
	if (p.start(args, dir / "v.out", dir / "v.err", std::nullopt, err)) {
		auto until = Clock::now() + std::chrono::seconds(5);
		while (!p.poll() && Clock::now() < until)
			std::this_thread::sleep_for(std::chrono::milliseconds(5));
		p.kill(std::chrono::milliseconds(100));
		std::istringstream in(slurp(dir / "v.out"));
		std::getline(in, line);
	}
	std::error_code ec;
	fs::remove_all(dir, ec);
	return line;
}

} // namespace

std::vector<ProbeEntry> probe_solvers(std::vector<SolverConfig> &configs)
{
	std::vector<ProbeEntry> out;
	for (auto &c : configs) {
		std::string key = c.command + "|" + c.confdir;
		ProbeEntry e;
		bool cached = false;
		{
			std::lock_guard lk(probe_mu);
			if (auto it = probe_cache.find(key); it != probe_cache.end()) {
				e = it->second;
				cached = true;
			}
		}
		if (!cached) {
			e.id = c.id;
			SolverConfig one = c;
			one.enabled = true;
			PortfolioOptions o;
			o.timeout = 5;
			try {
				auto r = run_portfolio(probe_script, {one}, o);
				e.ok = r.verdict.status == Status::Unsat;
				if (e.ok)
					e.status = "ok";
				else if (r.verdict.status == Status::Sat)
					e.status = "noncompliant (sat)";
				else
					e.status = to_string(r.all_runs[0].status);
			} catch (const no_solvers_available &) {
				e.status = "not found";
			}
			if (e.ok)
				e.version = version_of(c);
			std::lock_guard lk(probe_mu);
			probe_cache[key] = e;
		}
		e.id = c.id;
		if (!e.ok)
			c.enabled = false;
		out.push_back(e);
	}
	return out;
}

} // namespace feq
