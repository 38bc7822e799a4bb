use super::Folksonomy;

/// Largest set of posts in which every remaining user, resource and tag
/// occurs in at least `p` posts.
///
/// Peels entities below the threshold, removing every post they occur in,
/// until nothing changes. The result may be empty. `p <= 1` keeps
/// everything.
pub fn p_core(f: &Folksonomy, p: usize) -> Folksonomy {
    let n_posts = f.n_posts();
    let (n_u, n_r, n_t) = (f.n_users(), f.n_resources(), f.n_tags());

    // One flat entity space: users, then resources, then tags.
    let user_node = |i: usize| i;
    let resource_node = |i: usize| n_u + i;
    let tag_node = |i: usize| n_u + n_r + i;

    let mut entity_posts: Vec<Vec<u32>> = vec![Vec::new(); n_u + n_r + n_t];
    for (i, post) in f.post_records().iter().enumerate() {
        entity_posts[user_node(post.user.index())].push(i as u32);
        entity_posts[resource_node(post.resource.index())].push(i as u32);
        for t in &post.tags {
            entity_posts[tag_node(t.index())].push(i as u32);
        }
    }

    let mut count: Vec<usize> = entity_posts.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..count.len()).filter(|&e| count[e] < p).collect();
    let mut alive = vec![true; n_posts];

    while let Some(e) = queue.pop() {
        for &post in &entity_posts[e] {
            let post = post as usize;
            if !alive[post] {
                continue;
            }
            alive[post] = false;
            let rec = &f.post_records()[post];
            let touched = [
                user_node(rec.user.index()),
                resource_node(rec.resource.index()),
            ]
            .into_iter()
            .chain(rec.tags.iter().map(|t| tag_node(t.index())));
            for other in touched {
                count[other] -= 1;
                // Enqueue exactly once, on the step that crosses the threshold.
                if count[other] + 1 == p {
                    queue.push(other);
                }
            }
        }
    }

    f.retain_posts(|i| alive[i])
}
