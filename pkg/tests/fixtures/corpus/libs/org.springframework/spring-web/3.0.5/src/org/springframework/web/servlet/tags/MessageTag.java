package org.springframework.web.servlet.tags;

import javax.servlet.jsp.JspException;
import javax.servlet.jsp.PageContext;
import org.springframework.web.util.ExpressionEvaluationUtils;

public class MessageTag {

    private String code;

    private String arguments;

    private PageContext pageContext;

    public int doStartTag() throws JspException {
        String msg = resolveMessage();
        writeMessage(msg);
        return 0;
    }

    protected String resolveMessage() throws JspException {
        String resolvedCode = ExpressionEvaluationUtils.evaluateString("code", this.code, pageContext);
        Object[] argumentsArray = resolveArguments(this.arguments);
        return resolvedCode + argumentsArray.length;
    }

    protected Object[] resolveArguments(Object arguments) throws JspException {
        Object resolved = ExpressionEvaluationUtils.evaluate("arguments", (String) arguments, Object.class, pageContext);
        return new Object[] {resolved};
    }

    protected void writeMessage(String msg) {
        System.out.println(msg);
    }
}
