package com.noteapp.net;

public class NetworkClient {
    public Response execute(Request request) {
        Connection connection = openConnection(request.url());
        connection.setTimeout(requestTimeout);
        try {
            return readResponse(connection);
        } catch (IOException e) {
            return retryRequest(request);
        }
    }

    private Response retryRequest(Request request) {
        for (int attempt = 0; attempt < maxRetries; attempt++) {
            backoff(attempt);
            Connection connection = openConnection(request.url());
            Response response = readResponse(connection);
            if (response.isOk()) {
                return response;
            }
        }
        throw new NetworkException("request failed");
    }

    public void download(String url, File target) {
        streamToFile(openConnection(url), target);
    }

    public void upload(File source, String url) {
        streamFromFile(source, openConnection(url));
    }
}
