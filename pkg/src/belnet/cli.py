"""The ``belnet`` command: run the service, or talk to one as a thin client.

Client subcommands call the HTTP API of a running server and print JSON;
only ``serve`` and ``bundle`` touch a data directory locally. Flags can
also be set through BELNET_* environment variables.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click
import httpx

from .api.config import ServiceConfig
from .content import DEFAULT_MAX_ATTACHMENT_BYTES


@click.group()
def main():
    """Knowledge-portal service and client."""


# -- the service ------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1", envvar="BELNET_HOST", show_default=True)
@click.option("--port", default=8080, envvar="BELNET_PORT", show_default=True, type=int)
@click.option("--data-dir", default="belnet-data", envvar="BELNET_DATA_DIR",
              show_default=True, type=click.Path(path_type=Path))
@click.option("--tls-cert", default=None, envvar="BELNET_TLS_CERT",
              type=click.Path(exists=True, path_type=Path))
@click.option("--tls-key", default=None, envvar="BELNET_TLS_KEY",
              type=click.Path(exists=True, path_type=Path))
@click.option("--max-upload-bytes", default=DEFAULT_MAX_ATTACHMENT_BYTES,
              envvar="BELNET_MAX_UPLOAD_BYTES", show_default=True, type=int)
@click.option("--bootstrap-admin-file", default=None,
              envvar="BELNET_BOOTSTRAP_ADMIN_FILE",
              type=click.Path(exists=True, path_type=Path),
              help="JSON file with the first admin's username/password.")
def serve(host, port, data_dir, tls_cert, tls_key, max_upload_bytes,
          bootstrap_admin_file):
    """Run the portal service."""
    import uvicorn

    from .api import create_app

    config = ServiceConfig(
        port=port,
        data_dir=data_dir,
        tls_cert=tls_cert,
        tls_key=tls_key,
        max_upload_bytes=max_upload_bytes,
        bootstrap_admin_file=bootstrap_admin_file,
    )
    app = create_app(config)
    uvicorn.run(
        app,
        host=host,
        port=port,
        ssl_certfile=None if tls_cert is None else str(tls_cert),
        ssl_keyfile=None if tls_key is None else str(tls_key),
    )


# -- local bundle maintenance -------------------------------------------------


@main.group()
def bundle():
    """Export or import a content bundle against a local data directory."""


@bundle.command("export")
@click.argument("bundle_dir", type=click.Path(path_type=Path))
@click.option("--data-dir", required=True, envvar="BELNET_DATA_DIR",
              type=click.Path(path_type=Path))
def bundle_export(bundle_dir, data_dir):
    from .content import export_bundle
    from .storage import open_store

    with open_store(data_dir) as store:
        count = export_bundle(store, bundle_dir)
    click.echo(f"exported {count} records to {bundle_dir}")


@bundle.command("import")
@click.argument("bundle_dir", type=click.Path(exists=True, path_type=Path))
@click.option("--data-dir", required=True, envvar="BELNET_DATA_DIR",
              type=click.Path(path_type=Path))
def bundle_import(bundle_dir, data_dir):
    from .content import import_bundle
    from .storage import open_store

    with open_store(data_dir) as store:
        count = import_bundle(store, bundle_dir)
    click.echo(f"imported {count} records from {bundle_dir}")


# -- thin HTTP client ----------------------------------------------------------

_server_option = click.option(
    "--server", default="http://127.0.0.1:8080", envvar="BELNET_SERVER",
    show_default=True, help="Base URL of a running portal service.",
)
_token_option = click.option(
    "--token", default=None, envvar="BELNET_TOKEN",
    help="Bearer session token (from `belnet login`).",
)


def _client(server: str, token: Optional[str]) -> httpx.Client:
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    return httpx.Client(base_url=server, headers=headers, timeout=30.0)


def _show(response: httpx.Response) -> None:
    try:
        body = response.json()
    except ValueError:
        body = response.text
    if response.is_success:
        click.echo(json.dumps(body, indent=2, ensure_ascii=False))
    else:
        click.echo(
            json.dumps({"status": response.status_code, "body": body}, indent=2,
                       ensure_ascii=False),
            err=True,
        )
        sys.exit(1)


@main.command()
@click.argument("username")
@click.option("--password", prompt=True, hide_input=True, envvar="BELNET_PASSWORD")
@_server_option
def login(username, password, server):
    """Create a session; prints the bearer token."""
    with _client(server, None) as client:
        _show(client.post("/api/session",
                          json={"username": username, "password": password}))


@main.command()
@_server_option
@_token_option
def logout(server, token):
    """Revoke the current session token."""
    with _client(server, token) as client:
        _show(client.delete("/api/session"))


@main.group()
def resources():
    """Browse and edit portal resources."""


@resources.command("list")
@click.option("--tier", default=None, help="Tier ceiling: open/limited/restricted.")
@click.option("--taxonomy", default=None, help="Taxonomy node id (subtree filter).")
@click.option("--q", default=None, help="Case-insensitive substring filter.")
@click.option("--sort", default="updated_at", show_default=True)
@click.option("--dir", "direction", default="desc", show_default=True)
@click.option("--offset", default=0, type=int)
@click.option("--limit", default=50, type=int)
@_server_option
@_token_option
def resources_list(tier, taxonomy, q, sort, direction, offset, limit, server, token):
    params = {"sort": sort, "dir": direction, "offset": offset, "limit": limit}
    if tier:
        params["tier"] = tier
    if taxonomy:
        params["taxonomy"] = taxonomy
    if q:
        params["q"] = q
    with _client(server, token) as client:
        _show(client.get("/api/resources", params=params))


@resources.command("create")
@click.option("--title", required=True)
@click.option("--body", default="")
@click.option("--body-file", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--tier", default="open", show_default=True)
@click.option("--taxonomy-id", "taxonomy_ids", multiple=True)
@_server_option
@_token_option
def resources_create(title, body, body_file, tier, taxonomy_ids, server, token):
    if body_file is not None:
        body = body_file.read_text("utf-8")
    with _client(server, token) as client:
        _show(client.post("/api/resources", json={
            "title": title, "body": body, "tier": tier,
            "taxonomy_ids": list(taxonomy_ids),
        }))


@resources.command("get")
@click.argument("resource_id")
@_server_option
@_token_option
def resources_get(resource_id, server, token):
    with _client(server, token) as client:
        _show(client.get(f"/api/resources/{resource_id}"))


@resources.command("update")
@click.argument("resource_id")
@click.option("--expected-revision", required=True, type=int)
@click.option("--title", default=None)
@click.option("--body", default=None)
@click.option("--body-file", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--tier", default=None)
@_server_option
@_token_option
def resources_update(resource_id, expected_revision, title, body, body_file, tier,
                     server, token):
    payload = {"expected_revision": expected_revision}
    if body_file is not None:
        body = body_file.read_text("utf-8")
    if title is not None:
        payload["title"] = title
    if body is not None:
        payload["body"] = body
    if tier is not None:
        payload["tier"] = tier
    with _client(server, token) as client:
        _show(client.put(f"/api/resources/{resource_id}", json=payload))


@resources.command("archive")
@click.argument("resource_id")
@_server_option
@_token_option
def resources_archive(resource_id, server, token):
    with _client(server, token) as client:
        _show(client.post(f"/api/resources/{resource_id}/archive"))


@resources.command("history")
@click.argument("resource_id")
@_server_option
@_token_option
def resources_history(resource_id, server, token):
    with _client(server, token) as client:
        _show(client.get(f"/api/resources/{resource_id}/history"))


@resources.command("attach")
@click.argument("resource_id")
@click.argument("path", type=click.Path(exists=True, path_type=Path))
@click.option("--kind", required=True,
              type=click.Choice(["file", "reference-link", "video", "photo", "picture"]))
@click.option("--media-type", default=None)
@_server_option
@_token_option
def resources_attach(resource_id, path, kind, media_type, server, token):
    files = {"file": (path.name, path.read_bytes(),
                      media_type or "application/octet-stream")}
    with _client(server, token) as client:
        _show(client.post(
            f"/api/resources/{resource_id}/attachments",
            files=files, data={"kind": kind},
        ))


@main.group()
def glossary():
    """Search or edit the glossary."""


@glossary.command("search")
@click.argument("prefix", default="")
@_server_option
@_token_option
def glossary_search(prefix, server, token):
    with _client(server, token) as client:
        _show(client.get("/api/glossary", params={"prefix": prefix}))


@glossary.command("put")
@click.argument("term")
@click.option("--definition", required=True)
@click.option("--application-area", default="")
@click.option("--deviation-notes", default="")
@click.option("--source-ref", "source_refs", multiple=True)
@_server_option
@_token_option
def glossary_put(term, definition, application_area, deviation_notes, source_refs,
                 server, token):
    with _client(server, token) as client:
        _show(client.put(f"/api/glossary/{term}", json={
            "definition": definition,
            "application_area": application_area,
            "deviation_notes": deviation_notes,
            "source_refs": list(source_refs),
        }))


@main.group()
def taxonomy():
    """Inspect or extend the subject taxonomy."""


@taxonomy.command("list")
@_server_option
@_token_option
def taxonomy_list(server, token):
    with _client(server, token) as client:
        _show(client.get("/api/taxonomy"))


@taxonomy.command("add")
@click.argument("label")
@click.option("--parent-id", default=None)
@click.option("--sort-key", default=None)
@_server_option
@_token_option
def taxonomy_add(label, parent_id, sort_key, server, token):
    with _client(server, token) as client:
        _show(client.post("/api/taxonomy", json={
            "label": label, "parent_id": parent_id, "sort_key": sort_key,
        }))


@taxonomy.command("assign")
@click.argument("resource_id")
@click.argument("node_id")
@_server_option
@_token_option
def taxonomy_assign(resource_id, node_id, server, token):
    with _client(server, token) as client:
        _show(client.post(f"/api/resources/{resource_id}/taxonomy/{node_id}"))


@main.command()
@click.argument("fragment_id")
@click.option("--param", "params", multiple=True, help="Fragment query param k=v.")
@click.option("--etag", default=None, help="Conditional request: If-None-Match.")
@_server_option
@_token_option
def fragment(fragment_id, params, etag, server, token):
    """Fetch one page fragment, optionally conditional on an etag."""
    query = dict(p.split("=", 1) for p in params)
    headers = {"If-None-Match": etag} if etag else {}
    with _client(server, token) as client:
        response = client.get(f"/api/fragments/{fragment_id}", params=query,
                              headers=headers)
        if response.status_code == 304:
            click.echo(json.dumps({"status": 304, "etag": response.headers.get("etag")}))
            return
        _show(response)


if __name__ == "__main__":
    main()
