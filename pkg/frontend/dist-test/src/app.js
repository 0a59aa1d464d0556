/** Browser bootstrap: render the labeling queue and the adjudication view.
 *
 * Keyboard: r = relevant, i = irrelevant, 1-8 = role picker, Enter =
 * submit, u = re-open the last pair. All state is re-derivable from the
 * server; a refresh never loses an acknowledged label.
 */
import { AdjudicationView } from "./adjudication.js";
import { ApiClient } from "./api.js";
import { LabelingQueue } from "./queue.js";
import { ROLES } from "./types.js";
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function badge(label, value) {
    const node = el("span", "badge");
    node.append(el("strong", undefined, label + " "), el("span", undefined, value));
    return node;
}
function pairCard(pair) {
    const card = el("div", "pair-card");
    const note = el("section", "note-side");
    note.append(el("h3", undefined, "Release note sentence"));
    note.append(el("p", "sentence", pair.note?.text ?? pair.rn_sentence_id));
    note.append(el("p", "meta", `released ${pair.note?.released_at ?? "?"}` +
        (pair.note?.version ? ` · version ${pair.note.version}` : "")));
    const review = el("section", "review-side");
    review.append(el("h3", undefined, "Review sentence"));
    review.append(el("p", "sentence", pair.review?.text ?? pair.ur_sentence_id));
    review.append(el("p", "meta", `posted ${pair.review?.posted_at ?? "?"}`));
    if (pair.review?.full_text && pair.review.full_text !== pair.review.text) {
        const details = el("details");
        details.append(el("summary", undefined, "full review"));
        details.append(el("p", "full-review", pair.review.full_text));
        review.append(details);
    }
    const badges = el("div", "badges");
    for (const [backend, sim] of Object.entries(pair.sims)) {
        badges.append(badge(backend, `sim ${sim.toFixed(3)} · rank ${pair.ranks[backend]}`));
    }
    if (pair.delta_days !== null)
        badges.append(badge("Δt", `${pair.delta_days} days`));
    if (pair.app_id)
        badges.append(badge("app", pair.app_id));
    card.append(note, review, badges);
    return card;
}
function renderQueue(root, queue) {
    const render = (state) => {
        root.replaceChildren();
        if (state.phase === "loading" || state.phase === "idle") {
            root.append(el("p", "status", "loading next pair…"));
            return;
        }
        if (state.phase === "done") {
            root.append(el("p", "status", "all pairs labeled — thank you"));
            return;
        }
        if (state.phase === "error") {
            root.append(el("p", "status error", state.message ?? "error"));
            return;
        }
        const pair = state.pair;
        root.append(pairCard(pair));
        const controls = el("div", "controls");
        const relevantBtn = el("button", "relevance", "relevant (r)");
        const irrelevantBtn = el("button", "relevance", "irrelevant (i)");
        relevantBtn.classList.toggle("active", state.selection.relevance === "relevant");
        irrelevantBtn.classList.toggle("active", state.selection.relevance === "irrelevant");
        relevantBtn.onclick = () => queue.setRelevance("relevant");
        irrelevantBtn.onclick = () => queue.setRelevance("irrelevant");
        controls.append(relevantBtn, irrelevantBtn);
        const rolePicker = el("div", "role-picker");
        ROLES.forEach((role, index) => {
            const button = el("button", "role", `${index + 1} ${role.replaceAll("_", " ")}`);
            button.disabled = !queue.roleEnabled();
            button.classList.toggle("active", state.selection.role === role);
            button.onclick = () => queue.setRole(role);
            rolePicker.append(button);
        });
        controls.append(rolePicker);
        const submit = el("button", "submit", "submit (Enter)");
        submit.disabled = !queue.canSubmit();
        submit.onclick = () => void queue.submit();
        const undo = el("button", "undo", "undo (u)");
        undo.onclick = () => queue.undo();
        controls.append(submit, undo);
        const status = el("p", "status", `${state.remaining} unlabeled · ${state.submitted} submitted this session` +
            (state.queuedOffline ? ` · ${state.queuedOffline} queued offline` : ""));
        controls.append(status);
        if (state.message)
            controls.append(el("p", "status error", state.message));
        root.append(controls);
    };
    queue.onChange(render);
    render(queue.state);
}
async function renderAdjudication(root, view) {
    root.replaceChildren(el("p", "status", "loading disagreements…"));
    try {
        await view.load();
    }
    catch (err) {
        root.replaceChildren(el("p", "status error", String(err)));
        return;
    }
    const draw = () => {
        root.replaceChildren();
        const items = view.items();
        if (items.length === 0) {
            root.append(el("p", "status", "no open disagreements"));
            return;
        }
        for (const item of items) {
            const row = el("div", "adjudication-row");
            if (item.pair)
                row.append(pairCard(item.pair));
            const labels = el("div", "coder-labels");
            for (const [annotator, label] of Object.entries(item.disagreement.labels)) {
                labels.append(badge(annotator, label.relevance + (label.role ? ` / ${label.role}` : "")));
            }
            row.append(labels);
            const decide = el("div", "controls");
            for (const relevance of ["relevant", "irrelevant"]) {
                const button = el("button", "relevance", `adjudicate ${relevance}`);
                button.onclick = () => void view.decide(item.disagreement.pair_id, relevance, null).then(draw);
                decide.append(button);
            }
            row.append(decide);
            root.append(row);
        }
    };
    draw();
}
export function boot() {
    const params = new URLSearchParams(window.location.search);
    const annotator = params.get("annotator") ?? "a1";
    const api = new ApiClient("", { token: params.get("token") ?? undefined });
    const queue = new LabelingQueue(api, annotator, {
        app: params.get("app") ?? undefined,
        inIntersectionOnly: params.get("intersection") === "true",
    });
    const queueRoot = document.getElementById("queue");
    const adjudicationRoot = document.getElementById("adjudication");
    const tabs = document.querySelectorAll("nav button");
    tabs.forEach((tab) => {
        tab.onclick = () => {
            document.querySelectorAll("main > section").forEach((section) => {
                section.hidden = section.id !== tab.dataset.target;
            });
            if (tab.dataset.target === "adjudication") {
                void renderAdjudication(adjudicationRoot, new AdjudicationView(api));
            }
        };
    });
    document.addEventListener("keydown", (event) => {
        if (event.target instanceof HTMLInputElement)
            return;
        if (event.key === "r")
            queue.setRelevance("relevant");
        else if (event.key === "i")
            queue.setRelevance("irrelevant");
        else if (event.key === "u")
            queue.undo();
        else if (event.key === "Enter" && queue.canSubmit())
            void queue.submit();
        else if (/^[1-8]$/.test(event.key)) {
            const role = ROLES[Number(event.key) - 1];
            if (role)
                queue.setRole(role);
        }
    });
    window.addEventListener("online", () => void queue.flushOffline());
    renderQueue(queueRoot, queue);
    void queue.start();
}
boot();
