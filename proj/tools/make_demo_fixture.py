# Regenerates fixtures/demo. Deterministic: re-running must leave the tree unchanged.
import json, os, random, shutil
root = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'fixtures', 'demo')
shutil.rmtree(root, ignore_errors=True)
os.makedirs(root)
rng = random.Random(7)

people = [
 ("ana", "Ana Kovač", [], ["chess"]),
 ("ben", "Ben Okafor", [{"network":"FB","handle":"ben.okafor"}], ["rowing"]),
 ("chloe", "Chloé Martin", [{"network":"TW","handle":"chloem"}], ["climbing"]),
 ("dmitri", "Dmitri Volkov", [{"network":"FB","handle":"dvolkov"},{"network":"TW","handle":"dvolkov"}], ["robotics"]),
 ("elif", "Elif Demir", [], ["photography"]),
 ("farah", "Farah Haddad", [{"network":"FB","handle":"farah.h"}], ["chess"]),
 ("gus", "Gustav Lind", [{"network":"TW","handle":"gus_lind"}], ["sailing"]),
 ("hana", "Hana Sato", [{"network":"FB","handle":"hana.sato"},{"network":"TW","handle":"hanasato"}], ["origami"]),
]
manifest = {
 "assignments": [
  {"id":"hw1","title":"Array utilities in C","keywords":["arrays"],"language_profile":"generic-code",
   "weights":{"w_cs":0.6,"w_sn":0.25,"w_se":0.15}},
  {"id":"essay1","title":"Essay on open source","keywords":["open source"],"language_profile":"plain-text",
   "weights":{"w_cs":0.5,"w_sn":0.3,"w_se":0.2}},
 ],
 "people": [{"id":i,"full_name":n,"accounts":a,"keywords":k} for i,n,a,k in people],
}
json.dump(manifest, open(f'{root}/project.json','w'), indent=2, ensure_ascii=False)
open(f'{root}/project.json','a').write('\n')

funcs = {
'sum': '''int {f}(const int *{a}, int {n}) {{
    int {s} = 0;
    for (int {i} = 0; {i} < {n}; {i}++) {{
        {s} += {a}[{i}];
    }}
    return {s};
}}
''',
'max': '''int {f}(const int *{a}, int {n}) {{
    int {s} = {a}[0];
    int {i} = 1;
    while ({i} < {n}) {{
        if ({a}[{i}] > {s}) {s} = {a}[{i}];
        ++{i};
    }}
    return {s};
}}
''',
'reverse': '''void {f}(int *{a}, int {n}) {{
    for (int {i} = 0, {s} = {n} - 1; {i} < {s}; {i}++, {s}--) {{
        int t = {a}[{i}];
        {a}[{i}] = {a}[{s}];
        {a}[{s}] = t;
    }}
}}
''',
'bsearch': '''int {f}(const int *{a}, int {n}, int key) {{
    int lo = 0, hi = {n} - 1;
    while (lo <= hi) {{
        int {i} = lo + (hi - lo) / 2;
        if ({a}[{i}] == key) return {i};
        else if ({a}[{i}] < key) lo = {i} + 1;
        else hi = {i} - 1;
    }}
    return -1;
}}
''',
'bubble': '''void {f}(int *{a}, int {n}) {{
    int swapped;
    do {{
        swapped = 0;
        for (int {i} = 1; {i} < {n}; ++{i}) {{
            if ({a}[{i} - 1] > {a}[{i}]) {{
                int {s} = {a}[{i}];
                {a}[{i}] = {a}[{i} - 1];
                {a}[{i} - 1] = {s};
                swapped = 1;
            }}
        }}
    }} while (swapped);
}}
''',
'count': '''int {f}(const int *{a}, int {n}, int value) {{
    int {s} = 0;
    for (int {i} = {n}; {i}-- > 0;)
        {s} += ({a}[{i}] == value) ? 1 : 0;
    return {s};
}}
''',
'rotate': '''void {f}(int *{a}, int {n}, int by) {{
    by %= {n};
    if (by < 0) by += {n};
    for (int r = 0; r < by; r++) {{
        int {s} = {a}[{n} - 1];
        for (int {i} = {n} - 1; {i} > 0; {i}--) {a}[{i}] = {a}[{i} - 1];
        {a}[0] = {s};
    }}
}}
''',
'mean': '''double {f}(const int *{a}, int {n}) {{
    if ({n} <= 0) return 0.0;
    long long {s} = 0;
    int {i};
    for ({i} = 0; {i} != {n}; {i} += 1) {s} = {s} + {a}[{i}];
    return (double){s} / (double){n};
}}
''',
'dedup': '''int {f}(int *{a}, int {n}) {{
    if ({n} == 0) return 0;
    int {s} = 1;
    for (int {i} = 1; {i} < {n}; {i}++) {{
        if ({a}[{i}] != {a}[{s} - 1]) {{
            {a}[{s}++] = {a}[{i}];
        }}
    }}
    return {s};
}}
''',
'minidx': '''static int {f}(const int *{a}, int {n})
{{
    int best = 0;
    for (int {i} = 1; {i} < {n}; {i} = {i} + 1)
    {{
        switch ({a}[{i}] < {a}[best]) {{
        case 1: best = {i}; break;
        default: break;
        }}
    }}
    return best;
}}
''',
}
plan = {  # person -> functions (copying pairs share functions)
 'ana': ['sum','bsearch','bubble'],
 'ben': ['sum','bsearch','rotate'],      # copies two from ana
 'chloe': ['max','reverse','dedup'],
 'dmitri': ['max','reverse','mean'],     # copies two from chloe
 'elif': ['count','minidx','mean'],
 'farah': ['sum','bsearch','bubble'],    # copies ana entirely
 'gus': ['rotate','dedup','count'],
 'hana': ['minidx','max','bubble'],
}
names = ['total','acc','res','val','cnt','arr','xs','data','len','size','k','j','idx','p','q']
for pid, fs in plan.items():
    d = f'{root}/submissions/hw1/{pid}'
    os.makedirs(d)
    body = ['#include <stdio.h>\n', f'/* homework 1, {pid} */\n']
    for fn in fs:
        v = rng.sample(names, 4)
        body.append(funcs[fn].format(f=f'{fn}_{pid}', a=v[0], n=v[1], s=v[2], i=v[3]))
    call = f'{fs[0]}_{pid}(v, 4)' if fs[0] not in ('reverse','bubble','rotate') else 'v[0]'
    body.append('int main(void) {\n    int v[] = {5, 3, 9, 1};\n    printf("%d\\n", ' + call + ');\n    return 0;\n}\n')
    open(f'{d}/main.c','w').write(''.join(body))
# a split submission: two files concatenated in path order
os.rename(f'{root}/submissions/hw1/gus/main.c', f'{root}/submissions/hw1/gus/a_utils.c')
open(f'{root}/submissions/hw1/gus/b_main.c','w').write('int main(void) { return 0; }\n')

words = ("software community license code contributors project freedom users develop share improve "
 "review model collaboration distributed patches maintainers release bug tracker fork governance "
 "volunteers companies documentation quality security transparency innovation standards public "
 "education students learn practice ideas history movement").split()
def para(n):
    return ' '.join(rng.choice(words) for _ in range(n)).capitalize() + '.'
shared = [para(30) for _ in range(4)]
essays = {}
for pid, *_ in people:
    essays[pid] = [para(25) for _ in range(6)]
essays['elif'][1:3] = shared[0:2]; essays['gus'][2:4] = shared[0:2]  # elif and gus share text
essays['hana'][0] = shared[2]; essays['ana'][4] = shared[2]
essays['chloe'][3] = shared[3]; essays['dmitri'][5] = shared[3]
essays['farah'] = essays['ana'][:3] + [para(25) for _ in range(3)]
del essays['ben']  # ben did not submit the essay
for pid, ps in essays.items():
    d = f'{root}/submissions/essay1/{pid}'
    os.makedirs(d)
    open(f'{d}/essay.txt','w').write('\n\n'.join(ps) + '\n')

os.makedirs(f'{root}/social')
directory = [
 {"network":"FB","handle":"ana.kovac","display_name":"Ana Kovac"},
 {"network":"FB","handle":"ana.kovic","display_name":"Ana Kovič"},
 {"network":"TW","handle":"anak","display_name":"Ana Kovač"},
 {"network":"FB","handle":"chloe.martin","display_name":"Chloe Martin"},
 {"network":"FB","handle":"elif.d","display_name":"Elif Demir"},
 {"network":"TW","handle":"elifdemir","display_name":"Elif Demirr"},
 {"network":"FB","handle":"gus.lind","display_name":"Gustav Lind"},
 {"network":"TW","handle":"benokafor","display_name":"Ben Okafor"},
 {"network":"TW","handle":"farahh","display_name":"Farah Haddad"},
 {"network":"FB","handle":"random.person","display_name":"Someone Else"},
]
json.dump(directory, open(f'{root}/social/accounts.json','w'), indent=2, ensure_ascii=False)
acts = [
 {"network":"FB","activity":"mutual_follow","from":"ana.kovac","to":"ben.okafor"},
 {"network":"TW","activity":"follow","from":"benokafor","to":"anak"},
 {"network":"FB","activity":"like","from":"ben.okafor","to":"ana.kovac"},
 {"network":"FB","activity":"mutual_follow","from":"farah.h","to":"ana.kovac"},
 {"network":"TW","activity":"follow","from":"farahh","to":"anak"},
 {"network":"FB","activity":"comment","from":"farah.h","to":"ana.kovac","weight":0.1},
 {"network":"FB","activity":"follow","from":"dvolkov","to":"chloe.martin"},
 {"network":"TW","activity":"follow","from":"chloem","to":"dvolkov"},
 {"network":"TW","activity":"retweet","from":"chloem","to":"dvolkov"},
 {"network":"FB","activity":"mutual_follow","from":"elif.d","to":"gus.lind"},
 {"network":"TW","activity":"follow","from":"gus_lind","to":"elifdemir"},
 {"network":"FB","activity":"follow","from":"hana.sato","to":"dvolkov"},
 {"network":"TW","activity":"follow","from":"hanasato","to":"gus_lind"},
 {"network":"FB","activity":"follow","from":"random.person","to":"hana.sato"},
 {"network":"FB","activity":"share","from":"ben.okafor","to":"farah.h"},
]
with open(f'{root}/social/actions.jsonl','w') as f:
    for a in acts: f.write(json.dumps(a) + '\n')

os.makedirs(f'{root}/search')
linked = {('ana','ben'):40,('ana','farah'):55,('chloe','dmitri'):23,('elif','gus'):31,('dmitri','hana'):4,('gus','hana'):6,('ben','farah'):9}
kw = {i:set(k) for i,_,_,k in people}
hits = {}
for a in manifest['assignments']:
    ids = [p[0] for p in people]
    for x in range(len(ids)):
        for y in range(x+1, len(ids)):
            p, q = sorted((ids[x], ids[y]))
            key = ' '.join(sorted(kw[p] | kw[q] | set(a['keywords'])))
            n = linked.get((p,q), rng.choice([0,0,1,2,3]))
            if a['id'] == 'essay1': n = n // 2
            if n: hits[key] = n
json.dump(dict(sorted(hits.items())), open(f'{root}/search/hits.json','w'), indent=2)
open(f'{root}/search/hits.json','a').write('\n')
