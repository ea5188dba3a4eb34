// banet: command-line front end for Boolean automata network analysis.
//
// Exit codes: 0 analysis completed (whatever the verdict), 2 input error,
// 3 network larger than the state-space cap.

#include <banet/banet.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace banet;

constexpr int exit_input_error = 2;
constexpr int exit_cap = 3;

struct ScheduleChoice
{
    Mode mode;
    std::optional<BlockSchedule> blocks;
};

ScheduleChoice parse_schedule(const std::string& text, const Ban& b)
{
    if (text == "parallel")
        return {Mode::parallel, std::nullopt};
    if (text == "async")
        return {Mode::async, std::nullopt};
    if (text == "general")
        return {Mode::general, std::nullopt};
    if (text.rfind("bsus:", 0) == 0)
        return {Mode::bsus, parse_block_schedule(std::string_view(text).substr(5), b)};
    throw validation_error("unknown schedule '" + text + "' (expected parallel, async, general or bsus:{...})");
}

std::vector<std::string> split_commas(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::string render_arc(const Arc& a)
{
    return std::to_string(a.source) + " -> " + std::to_string(a.target) + " [" + std::string(to_symbol(a.sign)) + "]";
}

std::string render_cycle(const SignedCycle& c)
{
    std::string out = "cycle";
    for (auto v : c.vertices)
        out += " " + std::to_string(v) + " ->";
    out += " " + std::to_string(c.vertices.front());
    if (c.contains_nonmonotone)
        out += " [non-monotone]";
    else
        out += *c.negative ? " [negative]" : " [positive]";
    return out;
}

std::string render_sync(const SyncTransitionVerdict& t, std::size_t n)
{
    return to_string(t.source, n) + " --" + t.update_set.to_string() + "--> " + to_string(t.target, n);
}

std::string render_states(const std::vector<State>& states, std::size_t n)
{
    std::string out = "{";
    for (std::size_t k = 0; k < states.size(); ++k)
        out += (k ? "," : "") + to_string(states[k], n);
    return out + "}";
}

// ---------------------------------------------------------------------------

void cmd_check(const std::string& file, std::optional<std::size_t> cycles)
{
    auto b = load_network(file);
    auto g = build_igraph(b);
    std::cout << "n = " << b.size() << "\n";
    std::cout << "automata:";
    for (std::size_t i = 0; i < b.size(); ++i)
        std::cout << " " << i << ":" << b.name(i);
    std::cout << "\n";
    for (std::size_t i = 0; i < b.size(); ++i)
        std::cout << "  " << b.name(i) << " = " << b.print_function(i) << "\n";
    std::cout << "arcs: " << g.arcs().size() << "\n";
    for (const auto& a : g.arcs())
        std::cout << render_arc(a) << "\n";
    if (cycles) {
        auto found = enumerate_cycles(g, std::min(*cycles, b.size()));
        std::cout << "cycles (length <= " << std::min(*cycles, b.size()) << "): " << found.size() << "\n";
        for (const auto& c : found)
            std::cout << render_cycle(c) << "\n";
    }
}

void cmd_trans(const std::string& file, const std::string& schedule, bool dot, bool self_loops,
               std::optional<std::size_t> max_n)
{
    auto b = load_network(file);
    auto choice = parse_schedule(schedule, b);
    BuildOptions options{max_n, self_loops};
    auto g = build_graph(b, choice.mode, choice.blocks, options);
    if (dot) {
        std::cout << to_dot(g);
        return;
    }
    std::cout << "# mode=" << to_string(g.mode);
    if (g.schedule)
        std::cout << " schedule=" << to_string(*g.schedule, b.namer());
    std::cout << " n=" << g.n << " states=" << state_count(g.n) << " edges=" << g.edges.size() << "\n";
    auto hist = instability_histogram(GlobalMap(b, max_n.value_or(default_cap(choice.mode))));
    std::cout << "# |U(x)| histogram:";
    for (std::size_t k = 0; k < hist.size(); ++k)
        if (hist[k] != 0)
            std::cout << " " << k << ":" << hist[k];
    std::cout << "\n" << to_edge_list(g);
}

void cmd_attractors(const std::string& file, const std::string& schedule, bool states, std::optional<std::size_t> max_n)
{
    auto b = load_network(file);
    auto choice = parse_schedule(schedule, b);
    std::cout << render_report(analyze_attractors(b, choice.mode, choice.blocks, max_n), states);
}

void cmd_sensitivity(const std::string& file, bool all, std::optional<std::size_t> max_n)
{
    auto b = load_network(file);
    auto cap = max_n.value_or(default_sensitivity_cap);
    auto v = is_synchronism_sensitive(b, cap);
    const auto n = b.size();
    std::cout << (v.sensitive ? "SENSITIVE" : "NOT SENSITIVE") << "\n";
    std::cout << "async attractors: " << v.async_attractors.attractors.size() << "\n";
    std::cout << "general attractors: " << v.general_attractors.attractors.size() << "\n";
    for (const auto& s : v.only_async)
        std::cout << "only async: " << render_states(s, n) << "\n";
    for (const auto& s : v.only_general)
        std::cout << "only general: " << render_states(s, n) << "\n";
    std::cout << "synchronous transitions: " << v.shortcut_count << " shortcut, " << v.lasting.size() << " lasting\n";
    for (const auto& t : v.lasting)
        std::cout << "lasting " << render_sync(t, n) << "\n";
    if (all)
        for (const auto& t : classify_sync_transitions(b, cap))
            if (t.verdict == SyncEffect::shortcut)
                std::cout << "shortcut " << render_sync(t, n) << "\n";
}

void cmd_emulate(const std::string& target_file, const std::string& host_file, const std::string& precede,
                 const std::string& hide)
{
    auto target = load_network(target_file);
    auto host = load_network(host_file);
    auto p = parse_precedence(precede, host);
    auto v = emulation_equivalent(target, host, p, split_commas(hide));
    std::cout << (v.equivalent ? "EQUIVALENT" : "NOT EQUIVALENT") << "\n";
    std::cout << "visible:";
    for (const auto& name : v.visible)
        std::cout << " " << name;
    std::cout << "\n";
    for (std::size_t k = 0; k < v.effective.size(); ++k)
        std::cout << "effective " << v.visible[k] << " = " << v.effective[k] << "\n";
    if (v.witness)
        std::cout << "witness: " << v.witness->automaton << " at visible state " << v.witness->visible_state
                  << ": target=" << v.witness->target_value << " host=" << v.witness->host_value << "\n";
}

void cmd_nonexpansive(const std::string& file, std::optional<std::size_t> max_n)
{
    auto b = load_network(file);
    auto v = check_nonexpansive(b, max_n.value_or(default_pair_cap));
    std::cout << (v.holds ? "NON-EXPANSIVE" : "EXPANSIVE") << "\n";
    if (v.counterexample) {
        auto [x, y] = *v.counterexample;
        auto fx = parallel_step(b, x);
        auto fy = parallel_step(b, y);
        std::cout << "counterexample: x=" << to_string(x, b.size()) << " y=" << to_string(y, b.size())
                  << " d(x,y)=" << hamming(x, y) << " F(x)=" << to_string(fx, b.size())
                  << " F(y)=" << to_string(fy, b.size()) << " d(F(x),F(y))=" << hamming(fx, fy) << "\n";
    }
}

void cmd_nu(const std::string& file, const std::string& schedule, const std::string& compare)
{
    auto b = load_network(file);
    auto g = build_igraph(b);
    auto s = parse_block_schedule(schedule, b);
    auto nu = blocks_to_nu(s, g);
    std::cout << "schedule: " << to_string(s, b.namer()) << "\n";
    std::cout << "nu:\n";
    for (const auto& e : nu.entries())
        std::cout << e.source << " -> " << e.target << " = " << (e.value > 0 ? "+1" : "-1") << "\n";
    std::cout << "degree_of_synchronism (heuristic): " << degree_of_synchronism(nu) << " of " << nu.entries().size()
              << "\n";
    auto realized = nu_realizable(nu, b.size());
    std::cout << "coarsest equivalent: " << to_string(std::get<BlockSchedule>(realized), b.namer()) << "\n";
    if (!compare.empty()) {
        auto other = blocks_to_nu(parse_block_schedule(compare, b), g);
        std::cout << "equivalent to " << compare << ": " << (nu_equivalent(nu, other) ? "yes" : "no") << "\n";
    }
}

void cmd_trace(const std::string& file, const std::string& schedule, const std::string& from, std::size_t steps,
               const std::string& path, std::optional<std::size_t> max_n)
{
    auto b = load_network(file);
    auto choice = parse_schedule(schedule, b);
    auto sem = make_semantics(b, choice.mode, choice.blocks, max_n);
    GlobalMap f(b, max_n.value_or(default_cap(choice.mode)));
    std::vector<State> states;
    if (!path.empty()) {
        for (const auto& s : split_commas(path)) {
            if (s.size() != b.size())
                throw validation_error("state '" + s + "' does not have " + std::to_string(b.size()) + " digits");
            states.push_back(parse_state(s));
        }
        for (std::size_t k = 1; k < states.size(); ++k) {
            bool found = false;
            sem.for_each_successor(states[k - 1], [&](const Transition& t) { found |= t.target == states[k]; });
            if (!found)
                throw validation_error(to_string(states[k - 1], b.size()) + " -> " + to_string(states[k], b.size()) +
                                       " is not a " + std::string(to_string(choice.mode)) + " transition");
        }
    } else {
        if (!sem.deterministic())
            throw validation_error("--from needs a deterministic schedule; give --path for async or general");
        if (from.size() != b.size())
            throw validation_error("--from needs a state with " + std::to_string(b.size()) + " digits");
        states.push_back(parse_state(from));
        for (std::size_t k = 0; k < steps; ++k)
            states.push_back(sem.image(states.back()));
    }
    auto trace = instability_trace(f, states);
    for (std::size_t k = 0; k < states.size(); ++k)
        std::cout << k << " " << to_string(states[k], b.size()) << " |U|=" << trace[k] << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Boolean automata network analysis"};
    app.require_subcommand(1);

    std::string file, target, host, schedule = "async", precede, hide, from, path, compare, sign, figure;
    std::optional<std::size_t> max_n, cycles;
    std::size_t n = 0, steps = 10;
    bool dot = false, self_loops = false, states = false, all = false;

    auto* check = app.add_subcommand("check", "Print automata and the signed interaction graph");
    check->add_option("file", file, "Network file")->required();
    check->add_option("--cycles", cycles, "Also list simple cycles up to this length");

    auto* trans = app.add_subcommand("trans", "Print a transition graph");
    trans->add_option("file", file, "Network file")->required();
    trans->add_option("--schedule", schedule, "parallel | async | general | bsus:{a,b}{c}");
    trans->add_flag("--dot", dot, "Graphviz output");
    trans->add_flag("--emit-self-loops", self_loops, "General mode: also emit the vacuous (x,x) pairs");
    trans->add_option("--max-n", max_n, "Override the network size cap");

    auto* attractors = app.add_subcommand("attractors", "Attractor report");
    attractors->add_option("file", file, "Network file")->required();
    attractors->add_option("--schedule", schedule, "parallel | async | general | bsus:{a,b}{c}");
    attractors->add_flag("--states", states, "List member states");
    attractors->add_option("--max-n", max_n, "Override the network size cap");

    auto* sensitivity = app.add_subcommand("sensitivity", "Synchronism-sensitivity and shortcut classification");
    sensitivity->add_option("file", file, "Network file")->required();
    sensitivity->add_flag("--all", all, "Also list shortcut transitions");
    sensitivity->add_option("--max-n", max_n, "Override the network size cap");

    auto* emulate = app.add_subcommand("emulate", "Check that a host network emulates a target under precedence");
    emulate->add_option("target", target, "Target network file")->required();
    emulate->add_option("host", host, "Host network file")->required();
    emulate->add_option("--precede", precede, "Constraints u<v,...");
    emulate->add_option("--hide", hide, "Hidden host automata a,b,...");

    auto* nonexpansive = app.add_subcommand("nonexpansive", "Check that F never increases Hamming distance");
    nonexpansive->add_option("file", file, "Network file")->required();
    nonexpansive->add_option("--max-n", max_n, "Override the network size cap");

    auto* nu = app.add_subcommand("nu", "Arc labeling and synchronism degree of a block schedule");
    nu->add_option("file", file, "Network file")->required();
    nu->add_option("--schedule", schedule, "Block schedule {a,b}{c}")->required();
    nu->add_option("--compare", compare, "Second block schedule to test for equivalence");

    auto* trace = app.add_subcommand("trace", "Instability count along a trajectory");
    trace->add_option("file", file, "Network file")->required();
    trace->add_option("--schedule", schedule, "parallel | async | general | bsus:{a,b}{c}");
    trace->add_option("--from", from, "Initial state (deterministic schedules)");
    trace->add_option("--steps", steps, "Number of periods to follow");
    trace->add_option("--path", path, "Explicit comma-separated state path to check and trace");
    trace->add_option("--max-n", max_n, "Override the network size cap");

    auto* gen_cycle_cmd = app.add_subcommand("gen-cycle", "Write a Boolean automata cycle");
    gen_cycle_cmd->add_option("n", n, "Number of automata")->required();
    gen_cycle_cmd->add_option("sign", sign, "pos or neg")->required()->check(CLI::IsMember({"pos", "neg"}));

    auto* gen_figure = app.add_subcommand("gen-figure", "Write one of the bundled example networks");
    gen_figure->add_option("id", figure, "fig2 | fig3_left | fig3_right | fig5_left | fig5_right")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        if (*check)
            cmd_check(file, cycles);
        else if (*trans)
            cmd_trans(file, schedule, dot, self_loops, max_n);
        else if (*attractors)
            cmd_attractors(file, schedule, states, max_n);
        else if (*sensitivity)
            cmd_sensitivity(file, all, max_n);
        else if (*emulate)
            cmd_emulate(target, host, precede, hide);
        else if (*nonexpansive)
            cmd_nonexpansive(file, max_n);
        else if (*nu)
            cmd_nu(file, schedule, compare);
        else if (*trace)
            cmd_trace(file, schedule, from, steps, path, max_n);
        else if (*gen_cycle_cmd)
            std::cout << write_network(gen_cycle(n, sign == "neg"));
        else if (*gen_figure)
            std::cout << write_network(gen_figure_ban(figure));
    } catch (const cap_exceeded& e) {
        std::cerr << "error: " << e.what() << " (raise it with --max-n)\n";
        return exit_cap;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return 0;
}
